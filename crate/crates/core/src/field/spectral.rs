use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{Field, Grid};
use crate::special::{dirichlet_beta, zeta};

/// Parseval-normalized DFT coefficients: `h^N sum |u_j|^2 = sum |c_k|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Cached FFT plans and multipliers for one grid.
pub(crate) struct SpectralOps {
    grid: Grid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// `|xi_k|^{2s}` per flat spectral index.
    symbol: Vec<f64>,
    scale: f64,
}

thread_local! {
    static OPS_CACHE: RefCell<HashMap<(usize, u64, usize, u64), Rc<SpectralOps>>> =
        RefCell::new(HashMap::new());
}

pub(crate) fn ops_for(grid: &Grid) -> Rc<SpectralOps> {
    let key = (
        grid.dim(),
        grid.box_length().to_bits(),
        grid.points_per_dim(),
        grid.s().to_bits(),
    );
    OPS_CACHE.with(|cache| {
        cache
            .borrow_mut()
            .entry(key)
            .or_insert_with(|| Rc::new(SpectralOps::new(*grid)))
            .clone()
    })
}

impl SpectralOps {
    fn new(grid: Grid) -> Self {
        let m = grid.points_per_dim();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(m);
        let inverse = planner.plan_fft_inverse(m);
        let two_s = 2.0 * grid.s();
        let symbol = (0..grid.len())
            .map(|k| {
                let xi = grid.wavenumber_norm(k);
                if xi == 0.0 {
                    0.0
                } else {
                    xi.powf(two_s)
                }
            })
            .collect();
        // c_k = (h / M)^{N/2} * sum_j u_j e^{-2 pi i jk/M}
        let scale = (grid.spacing() / m as f64).powf(0.5 * grid.dim() as f64);
        SpectralOps {
            grid,
            forward,
            inverse,
            symbol,
            scale,
        }
    }

    pub(crate) fn symbol(&self) -> &[f64] {
        &self.symbol
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let m = self.grid.points_per_dim();
        if self.grid.dim() == 1 {
            plan.process(data);
            return;
        }
        for row in data.chunks_exact_mut(m) {
            plan.process(row);
        }
        let mut column = vec![Complex64::default(); m];
        for c in 0..m {
            for r in 0..m {
                column[r] = data[r * m + c];
            }
            plan.process(&mut column);
            for r in 0..m {
                data[r * m + c] = column[r];
            }
        }
    }

    pub(crate) fn forward(&self, u: &Field) -> Spectrum {
        let mut data: Vec<Complex64> =
            u.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut data, &self.forward);
        for c in &mut data {
            *c *= self.scale;
        }
        Spectrum {
            grid: self.grid,
            coeffs: data,
        }
    }

    pub(crate) fn inverse(&self, spec: Spectrum) -> Field {
        let mut data = spec.coeffs;
        self.transform(&mut data, &self.inverse);
        // inverse of the forward scaling: divide by scale * M^N
        let factor = 1.0 / (self.scale * self.grid.len() as f64);
        let values = data.iter().map(|c| c.re * factor).collect();
        Field::from_parts(self.grid, values)
    }

    pub(crate) fn kinetic(&self, u: &Field) -> f64 {
        let spec = self.forward(u);
        spec.coeffs
            .iter()
            .zip(&self.symbol)
            .map(|(c, w)| w * c.norm_sqr())
            .sum()
    }

    pub(crate) fn apply_multiplier(&self, u: &Field, weight: impl Fn(usize, f64) -> f64) -> Field {
        let mut spec = self.forward(u);
        for (k, c) in spec.coeffs.iter_mut().enumerate() {
            *c *= weight(k, self.symbol[k]);
        }
        self.inverse(spec)
    }

    /// Kinetic energy and `(-Delta)^s u` from one forward transform.
    pub(crate) fn kinetic_and_laplacian(&self, u: &Field) -> (f64, Field) {
        let mut spec = self.forward(u);
        let mut kinetic = 0.0;
        for (c, w) in spec.coeffs.iter_mut().zip(&self.symbol) {
            kinetic += w * c.norm_sqr();
            *c *= *w;
        }
        (kinetic, self.inverse(spec))
    }

    pub(crate) fn laplacian(&self, u: &Field) -> Field {
        self.apply_multiplier(u, |_, w| w)
    }
}

pub fn dft_forward(u: &Field) -> Spectrum {
    ops_for(u.grid()).forward(u)
}

/// Inverse of [`dft_forward`]; the imaginary residue of non-Hermitian
/// input is discarded.
pub fn dft_inverse(spec: Spectrum) -> Field {
    let grid = spec.grid;
    ops_for(&grid).inverse(spec)
}

/// `|grad_s u|_2^2 = sum_k |xi_k|^{2s} |c_k|^2`.
pub fn frac_kinetic(u: &Field) -> f64 {
    ops_for(u.grid()).kinetic(u)
}

/// Whole-space seminorm `int |xi|^{2s} |u_hat(xi)|^2 d xi` of a field that
/// has decayed inside the box.
///
/// The periodic sum in [`frac_kinetic`] is a lattice rule for this integral
/// whose error is dominated by the non-smooth weight at `xi = 0`. The
/// leading error terms are removed analytically:
/// `-Z(-s) dxi^{2s} |c_0|^2`, with `Z` the Epstein zeta function of the
/// integer lattice (`2 zeta(-2s)` in 1D, `4 zeta(-s) beta(-s)` in 2D), and
/// in 1D also `-zeta(-2s-2) dxi^{3+2s} G''(0)` with `G''(0)` from the three
/// lowest modes.
pub fn free_space_kinetic(u: &Field) -> f64 {
    let grid = *u.grid();
    let ops = ops_for(&grid);
    let spec = ops.forward(u);
    let periodic: f64 = spec
        .coeffs
        .iter()
        .zip(ops.symbol())
        .map(|(c, w)| w * c.norm_sqr())
        .sum();
    let s = grid.s();
    let dxi = 2.0 * std::f64::consts::PI / grid.box_length();
    let c0 = spec.coeffs[0].norm_sqr();
    match grid.dim() {
        1 => {
            let m = grid.points_per_dim();
            let c1 = spec.coeffs[1].norm_sqr() + spec.coeffs[m - 1].norm_sqr();
            let curvature = (c1 - 2.0 * c0) / dxi.powi(3);
            periodic - 2.0 * zeta(-2.0 * s) * dxi.powf(2.0 * s) * c0
                - zeta(-2.0 * s - 2.0) * dxi.powf(3.0 + 2.0 * s) * curvature
        }
        _ => periodic - 4.0 * zeta(-s) * dirichlet_beta(-s) * dxi.powf(2.0 * s) * c0,
    }
}

/// `(-Delta)^s u` through the multiplier `|xi|^{2s}`.
pub fn frac_laplacian_apply(u: &Field) -> Field {
    ops_for(u.grid()).laplacian(u)
}

/// `|g|_{H^{-s}} = (sum_k |c_k|^2 / (1 + |xi_k|^{2s}))^{1/2}`.
pub fn hminus_norm(g: &Field) -> f64 {
    let ops = ops_for(g.grid());
    let spec = ops.forward(g);
    spec.coeffs
        .iter()
        .zip(ops.symbol())
        .map(|(c, w)| c.norm_sqr() / (1.0 + w))
        .sum::<f64>()
        .sqrt()
}

/// Periodic translation `u(x - shift)` by an arbitrary vector, carried out as
/// a phase rotation of every Fourier mode.
pub fn translate(u: &Field, shift: [f64; 2]) -> Field {
    let grid = *u.grid();
    let ops = ops_for(&grid);
    let mut spec = ops.forward(u);
    let scale = 2.0 * std::f64::consts::PI / grid.box_length();
    let m = grid.points_per_dim();
    for (k, c) in spec.coeffs.iter_mut().enumerate() {
        let idx = grid.multi_index(k);
        let mut factor = Complex64::new(1.0, 0.0);
        for axis in 0..grid.dim() {
            let f = grid.frequency_index(idx[axis]);
            let xi = scale * f as f64;
            // the Nyquist bin is its own conjugate partner; only its cosine
            // part survives in a real field
            factor *= if f == -(m as i64 / 2) {
                Complex64::new((xi * shift[axis]).cos(), 0.0)
            } else {
                Complex64::from_polar(1.0, -xi * shift[axis])
            };
        }
        *c *= factor;
    }
    ops.inverse(spec)
}

/// Translates `u` onto `reference` by the shift that maximizes their
/// periodic overlap `int u(x + a) reference(x) dx`, located on the grid and
/// refined by a parabola through the peak along each axis.
///
/// Returns the aligned field and the shift `a`.
pub fn align(u: &Field, reference: &Field) -> (Field, [f64; 2]) {
    let grid = *u.grid();
    let ops = ops_for(&grid);
    let a = ops.forward(u);
    let b = ops.forward(reference);
    let product = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| x * y.conj())
        .collect();
    let corr = ops.inverse(Spectrum {
        grid,
        coeffs: product,
    });
    let c = corr.values();
    let peak = (0..c.len()).fold(0, |best, k| if c[k] > c[best] { k } else { best });
    let m = grid.points_per_dim();
    let idx = grid.multi_index(peak);
    let mut shift = [0.0; 2];
    for axis in 0..grid.dim() {
        let at = |d: isize| {
            let mut j = idx;
            j[axis] = (idx[axis] as isize + d).rem_euclid(m as isize) as usize;
            c[grid.flat_index(j)]
        };
        let (lo, mid, hi) = (at(-1), at(0), at(1));
        let curv = lo - 2.0 * mid + hi;
        let delta = if curv < 0.0 { 0.5 * (lo - hi) / curv } else { 0.0 };
        let mut k = idx[axis] as f64 + delta;
        if k >= 0.5 * m as f64 {
            k -= m as f64;
        }
        shift[axis] = k * grid.spacing();
    }
    (translate(u, [-shift[0], -shift[1]]), shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_field(grid: Grid, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Field::new(grid, values).unwrap()
    }

    #[test]
    fn constant_field_has_only_zero_mode() {
        let g = Grid::line(10.0, 32, 0.5).unwrap();
        let spec = dft_forward(&Field::constant(g, 2.5));
        for (k, c) in spec.coeffs().iter().enumerate() {
            if k == 0 {
                assert!(c.norm() > 1.0);
            } else {
                assert!(c.norm() < 1e-13);
            }
        }
    }

    #[test]
    fn cosine_concentrates_at_unit_frequency() {
        let g = Grid::line(2.0 * PI, 64, 0.3).unwrap();
        let u = Field::from_fn(g, |x| x[0].cos()).unwrap();
        let spec = dft_forward(&u);
        for (k, c) in spec.coeffs().iter().enumerate() {
            let f = g.frequency_index(k).abs();
            if f == 1 {
                assert!((c.norm_sqr() - PI / 2.0).abs() < 1e-12);
            } else {
                assert!(c.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn parseval_and_round_trip() {
        for grid in [Grid::line(13.0, 128, 0.4).unwrap(), Grid::new(2, 9.0, 16, 0.7).unwrap()] {
            let u = random_field(grid, 7);
            let spec = dft_forward(&u);
            assert!((spec.energy() - u.mass()).abs() <= 1e-12 * u.mass());
            let back = dft_inverse(spec);
            let err: f64 = back
                .values()
                .iter()
                .zip(u.values())
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            let norm: f64 = u.values().iter().map(|a| a * a).sum::<f64>().sqrt();
            assert!(err <= 1e-12 * norm);
        }
    }

    #[test]
    fn kinetic_of_unit_cosine_is_pi() {
        for s in [0.1, 0.25, 0.5, 0.9] {
            let g = Grid::line(2.0 * PI, 64, s).unwrap();
            let u = Field::from_fn(g, |x| x[0].cos()).unwrap();
            assert!((frac_kinetic(&u) - PI).abs() < 1e-12);
        }
        let g = Grid::line(5.0, 16, 0.5).unwrap();
        assert!(frac_kinetic(&Field::constant(g, 3.0)).abs() < 1e-20);
    }

    #[test]
    fn laplacian_eigenfunctions_and_kernel() {
        let (l, s) = (7.0, 0.35);
        let g = Grid::line(l, 64, s).unwrap();
        assert!(frac_laplacian_apply(&Field::constant(g, 1.3))
            .values()
            .iter()
            .all(|v| v.abs() < 1e-13));
        for k in [1, 3, 10] {
            let xi = 2.0 * PI * k as f64 / l;
            let u = Field::from_fn(g, |x| (xi * x[0]).cos()).unwrap();
            let lu = frac_laplacian_apply(&u);
            let eig = xi.powf(2.0 * s);
            for (a, b) in lu.values().iter().zip(u.values()) {
                assert!((a - eig * b).abs() < 1e-12 * eig.max(1.0));
            }
        }
    }

    #[test]
    fn laplacian_quadratic_form_is_kinetic() {
        let g = Grid::new(2, 6.0, 16, 0.6).unwrap();
        let u = random_field(g, 11);
        let form = frac_laplacian_apply(&u).inner(&u);
        let kin = frac_kinetic(&u);
        assert!((form - kin).abs() <= 1e-12 * kin);
    }

    #[test]
    fn free_space_kinetic_matches_closed_forms() {
        use crate::special::gamma;
        // 1D: int |xi|^{2s} e^{-xi^2/2} / 2 = 2^{s-1/2} Gamma(s + 1/2)
        for s in [0.25, 0.5, 0.75] {
            let g = Grid::line(40.0, 512, s).unwrap();
            let u = Field::from_fn(g, |x| (-x[0] * x[0]).exp()).unwrap();
            let exact = 2f64.powf(s - 0.5) * gamma(s + 0.5);
            let plain = (frac_kinetic(&u) - exact).abs() / exact;
            let fixed = (free_space_kinetic(&u) - exact).abs() / exact;
            assert!(fixed < 1e-5, "s = {s}: {fixed}");
            assert!(fixed < 0.01 * plain);
        }
        // 2D: int |xi|^{2s} e^{-|xi|^2/2} / 4 = (pi/2) 2^s Gamma(s + 1)
        for s in [0.3, 0.8] {
            let g = Grid::new(2, 20.0, 64, s).unwrap();
            let u = Field::from_fn(g, |x| (-(x[0] * x[0] + x[1] * x[1])).exp()).unwrap();
            let exact = 0.5 * PI * 2f64.powf(s) * gamma(s + 1.0);
            let plain = (frac_kinetic(&u) - exact).abs() / exact;
            let fixed = (free_space_kinetic(&u) - exact).abs() / exact;
            assert!(fixed < 0.1 * plain, "s = {s}: {fixed} vs {plain}");
        }
    }

    #[test]
    fn hminus_norm_cases() {
        let g = Grid::line(8.0, 32, 0.5).unwrap();
        let c = Field::constant(g, 0.7);
        assert!((hminus_norm(&c) - c.l2_norm()).abs() < 1e-13);
        let xi = 2.0 * PI * 3.0 / 8.0;
        let mode = Field::from_fn(g, |x| (xi * x[0]).sin()).unwrap();
        let expected = mode.l2_norm() / (1.0 + xi.powf(1.0)).sqrt();
        assert!((hminus_norm(&mode) - expected).abs() < 1e-13);
        let r = random_field(g, 3);
        assert!(hminus_norm(&r) <= r.l2_norm());
    }

    #[test]
    fn translation_preserves_mass_and_kinetic() {
        let g = Grid::line(20.0, 256, 0.5).unwrap();
        let u = Field::from_fn(g, |x| (-(x[0] - 1.0).powi(2)).exp()).unwrap();
        let t = translate(&u, [3.3, 0.0]);
        assert!((t.mass() - u.mass()).abs() < 1e-12 * u.mass());
        assert!((frac_kinetic(&t) - frac_kinetic(&u)).abs() < 1e-12 * frac_kinetic(&u));
        let expected = Field::from_fn(g, |x| (-(x[0] - 4.3).powi(2)).exp()).unwrap();
        for (a, b) in t.values().iter().zip(expected.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn align_recovers_a_subgrid_shift() {
        let g = Grid::line(20.0, 256, 0.5).unwrap();
        let r = Field::from_fn(g, |x| (-x[0] * x[0]).exp()).unwrap();
        let u = translate(&r, [1.2345, 0.0]);
        let (back, shift) = align(&u, &r);
        assert!((shift[0] - 1.2345).abs() < 1e-3, "{shift:?}");
        let err = back.add_scaled(-1.0, &r).l2_norm() / r.l2_norm();
        assert!(err < 1e-3, "{err}");
    }
}
