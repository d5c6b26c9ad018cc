//! Concentration-compactness diagnostics for finite sequences of fields of
//! equal mass: the concentration function, a vanishing / dichotomy /
//! compactness classifier, and the cutoff splitting `u ~ v + w` used in
//! the dichotomy case.
//!
//! Trends "as n -> inf" are read off the last half of the sequence. The
//! verdicts are statements about the finite sample only.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{frac_kinetic, ops_for, translate, Field, Grid, Point, Spectrum};

/// Periodic displacement `x - y` reduced to `[-L/2, L/2)` per axis.
fn torus_delta(grid: &Grid, x: &Point, y: &Point) -> f64 {
    let l = grid.box_length();
    let mut sq = 0.0;
    for axis in 0..grid.dim() {
        let d = (x[axis] - y[axis] + 0.5 * l).rem_euclid(l) - 0.5 * l;
        sq += d * d;
    }
    sq.sqrt()
}

/// Ball masses `int_{B(y, R)} u^2` for every grid center `y` at once, by
/// periodic convolution of `u^2` with the ball indicator.
struct BallMasses {
    grid: Grid,
    density: Spectrum,
    mass: f64,
}

impl BallMasses {
    fn new(u: &Field) -> Self {
        let grid = *u.grid();
        let rho = u.map(|v| v * v);
        BallMasses {
            grid,
            density: ops_for(&grid).forward(&rho),
            mass: u.mass(),
        }
    }

    fn at_radius(&self, r: f64) -> Vec<f64> {
        let grid = self.grid;
        let ops = ops_for(&grid);
        let slack = 1e-9 * grid.spacing();
        let kernel = Field::from_parts(
            grid,
            (0..grid.len())
                .map(|m| if grid.torus_distance(0, m) <= r + slack { 1.0 } else { 0.0 })
                .collect(),
        );
        // forward(f) = s DFT(f), so forward(rho * k) = forward(rho) forward(k) / s
        let s = (grid.spacing() / grid.points_per_dim() as f64).powf(0.5 * grid.dim() as f64);
        let mut spec = ops.forward(&kernel);
        for (b, a) in spec.coeffs_mut().iter_mut().zip(self.density.coeffs()) {
            *b = a * *b / s;
        }
        let conv = ops.inverse(spec);
        let h = grid.cell_volume();
        conv.values()
            .iter()
            .map(|v| (h * v).clamp(0.0, self.mass))
            .collect()
    }

    /// `(Q(R), argmax index)`, ties to the smallest index.
    fn max_at(&self, r: f64) -> (f64, usize) {
        let masses = self.at_radius(r);
        let top = masses.iter().cloned().fold(0.0f64, f64::max);
        let tie = 1e-12 * self.mass.max(f64::MIN_POSITIVE);
        let idx = masses.iter().position(|&m| m >= top - tie).unwrap_or(0);
        (top, idx)
    }
}

fn check_radius(grid: &Grid, r: f64) -> Result<()> {
    let half = 0.5 * grid.box_length();
    if !(r > 0.0) {
        return Err(Error::invariant("R > 0"));
    }
    if r > half {
        return Err(Error::RadiusTooLarge { radius: r, half });
    }
    Ok(())
}

/// `Q(R) = max_y int_{B(y, R)} u^2` over grid centers `y` on the torus, and
/// the maximizing center (smallest flat index among ties).
pub fn concentration_function(u: &Field, r: f64) -> Result<(f64, Point)> {
    check_radius(u.grid(), r)?;
    let (q, idx) = BallMasses::new(u).max_at(r);
    Ok((q, u.grid().point(idx)))
}

/// `int_{B(y, R)} u^2` for one arbitrary center.
pub fn ball_mass(u: &Field, y: &Point, r: f64) -> f64 {
    let grid = u.grid();
    let sum: f64 = u
        .values()
        .iter()
        .enumerate()
        .filter(|(j, _)| torus_delta(grid, &grid.point(*j), y) <= r)
        .map(|(_, v)| v * v)
        .sum();
    grid.cell_volume() * sum
}

/// `1` below `a`, `0` above `2a`, cubic `C^1` ramp between.
fn inner_cutoff(r: f64, a: f64) -> f64 {
    let t = ((r - a) / a).clamp(0.0, 1.0);
    1.0 - t * t * (3.0 - 2.0 * t)
}

/// Splits `u` into `v`, equal to `u` on `B(y, R0)` and zero outside
/// `B(y, 2 R0)`, and `w`, zero on `B(y, Rn)` and equal to `u` outside
/// `B(y, 2 Rn)`, with `C^1` radial ramps on the two annuli.
pub fn split_sequence(u: &Field, y: &Point, r0: f64, rn: f64) -> Result<(Field, Field)> {
    let grid = *u.grid();
    if !(r0 > 0.0 && 2.0 * r0 < rn && 2.0 * rn <= 0.5 * grid.box_length()) {
        return Err(Error::RadiusOrder(format!(
            "need 0 < 2 R0 < Rn and 2 Rn <= L/2, got R0 = {r0}, Rn = {rn}, L = {}",
            grid.box_length()
        )));
    }
    let mut v = Vec::with_capacity(grid.len());
    let mut w = Vec::with_capacity(grid.len());
    for (j, &val) in u.values().iter().enumerate() {
        let r = torus_delta(&grid, &grid.point(j), y);
        v.push(val * inner_cutoff(r, r0));
        w.push(val * (1.0 - inner_cutoff(r, rn)));
    }
    Ok((Field::new(grid, v)?, Field::new(grid, w)?))
}

/// Translates `u` by the integer vector `z = floor(y)`, so that a
/// concentration center at `y` moves into the unit cell `[0, 1)^N`.
pub fn recenter(u: &Field, y: &Point) -> Field {
    let mut z = [0.0; 2];
    for axis in 0..u.grid().dim() {
        z[axis] = -y[axis].floor();
    }
    if z == [0.0; 2] {
        return u.clone();
    }
    translate(u, z)
}

/// Fields on one grid with a common mass.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSequence {
    fields: Vec<Field>,
    mass: f64,
}

impl FieldSequence {
    pub fn new(fields: Vec<Field>) -> Result<Self> {
        let first = fields
            .first()
            .ok_or_else(|| Error::InvalidField("empty sequence".into()))?;
        let grid = *first.grid();
        let mass = first.mass();
        if mass <= 0.0 {
            return Err(Error::ZeroField);
        }
        for (n, f) in fields.iter().enumerate() {
            if !f.grid().same_shape(&grid) {
                return Err(Error::InvalidField(format!("field {n} lives on another grid")));
            }
            if (f.mass() - mass).abs() > 1e-8 * mass {
                return Err(Error::InvalidField(format!(
                    "field {n} has mass {} instead of {mass}",
                    f.mass()
                )));
            }
        }
        Ok(FieldSequence { fields, mass })
    }

    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn grid(&self) -> &Grid {
        self.fields[0].grid()
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CCVerdict {
    Vanishing,
    Dichotomy,
    Compactness,
}

/// Capture radii `R_n(eps)` and the centers that attain them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaptureRow {
    pub epsilon: f64,
    /// `None` when `B(y, L/4)` cannot hold `c^2 - eps`.
    pub radii: Vec<Option<f64>>,
    pub centers: Vec<Point>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QSample {
    pub n: usize,
    pub r: f64,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub r0: f64,
    pub rn: f64,
    pub mass_v: f64,
    pub mass_w: f64,
    /// Mass of `u` on `R0 <= |x - y| <= 2 Rn`.
    pub annulus_mass: f64,
    /// `|grad_s u|^2 - |grad_s v|^2 - |grad_s w|^2`
    pub surplus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CCClassification {
    pub verdict: CCVerdict,
    pub mass: f64,
    /// Stabilized inner mass in the dichotomy case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a2: Option<f64>,
    /// Concentration centers `y_n`.
    pub centers: Vec<Point>,
    pub capture: Vec<CaptureRow>,
    /// One split per field in the dichotomy case.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub splits: Vec<Split>,
    /// The `eps` the dichotomy split is built for.
    pub epsilon: f64,
    pub samples: Vec<QSample>,
    pub rationale: String,
}

impl CCClassification {
    pub fn samples_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "R", "Q"])?;
        for s in &self.samples {
            w.write_record([s.n.to_string(), format!("{:?}", s.r), format!("{:?}", s.q)])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Radii `2h * 2^{i/4}` up to `L/4`.
fn radius_ladder(grid: &Grid) -> Vec<f64> {
    let top = 0.25 * grid.box_length();
    let mut out = Vec::new();
    let mut r = 2.0 * grid.spacing();
    while r <= top {
        out.push(r);
        r *= 2f64.powf(0.25);
    }
    out
}

/// Smallest `k h <= L/4` with `Q(k h) >= target`, by bisection on the
/// monotone map `k -> Q(k h)`.
fn capture_radius(b: &BallMasses, target: f64) -> Option<(f64, usize)> {
    let h = b.grid.spacing();
    let kmax = (0.25 * b.grid.box_length() / h).floor() as usize;
    let (q_top, _) = b.max_at(kmax as f64 * h);
    if q_top < target {
        return None;
    }
    let (mut lo, mut hi) = (0usize, kmax);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if b.max_at(mid as f64 * h).0 >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (_, idx) = b.max_at(hi as f64 * h);
    Some((hi as f64 * h, idx))
}

/// Classifies a sequence against a decreasing ladder of `eps` values.
///
/// * compactness: for every `eps` a ball of radius at most `L/4` holds
///   `c^2 - eps` for every field, and these radii are stable over the last
///   half (spread at most a tenth of their size plus two cells);
/// * vanishing: otherwise, if `Q_n(R)` strictly decreases over the last half
///   for every ladder radius `R <= L/8`;
/// * dichotomy: otherwise, if some `Q_n(R)` stays within `eps_min` over the
///   last half at a level strictly between `eps_max` and `c^2 - eps_max`.
///
/// Anything else, or fewer than four fields, is [`Error::Inconclusive`].
pub fn classify(seq: &FieldSequence, eps_ladder: &[f64]) -> Result<CCClassification> {
    if seq.len() < 4 {
        return Err(Error::Inconclusive(format!(
            "{} fields cannot show a trend; need at least 4",
            seq.len()
        )));
    }
    if eps_ladder.is_empty()
        || eps_ladder.iter().any(|e| !(*e > 0.0))
        || eps_ladder.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::invariant("eps ladder positive and decreasing"));
    }
    let grid = *seq.grid();
    let c2 = seq.mass();
    let h = grid.spacing();
    let n = seq.len();
    let half = n / 2;
    let (eps_max, eps_min) = (eps_ladder[0], eps_ladder[eps_ladder.len() - 1]);
    let balls: Vec<BallMasses> = seq.fields().par_iter().map(BallMasses::new).collect();
    let ladder = radius_ladder(&grid);

    // Q_n(R) over the ladder, with maximizing centers
    let profiles: Vec<Vec<(f64, usize)>> = balls
        .par_iter()
        .map(|b| ladder.iter().map(|&r| b.max_at(r)).collect())
        .collect();
    let samples = profiles
        .iter()
        .enumerate()
        .flat_map(|(k, p)| {
            ladder
                .iter()
                .zip(p)
                .map(move |(&r, &(q, _))| QSample { n: k, r, q })
        })
        .collect();

    let capture: Vec<CaptureRow> = eps_ladder
        .iter()
        .map(|&eps| {
            let found: Vec<Option<(f64, usize)>> = balls
                .par_iter()
                .map(|b| capture_radius(b, c2 - eps))
                .collect();
            CaptureRow {
                epsilon: eps,
                radii: found.iter().map(|f| f.map(|(r, _)| r)).collect(),
                centers: found
                    .iter()
                    .zip(&profiles)
                    .map(|(f, p)| grid.point(f.map_or(p[p.len() - 1].1, |(_, i)| i)))
                    .collect(),
            }
        })
        .collect();

    let mut out = CCClassification {
        verdict: CCVerdict::Compactness,
        mass: c2,
        a2: None,
        centers: capture[capture.len() - 1].centers.clone(),
        capture,
        splits: Vec::new(),
        epsilon: eps_min,
        samples,
        rationale: String::new(),
    };

    let compact = out.capture.iter().all(|row| {
        let Some(radii) = row.radii.iter().copied().collect::<Option<Vec<f64>>>() else {
            return false;
        };
        let last = &radii[half..];
        let hi = last.iter().cloned().fold(f64::MIN, f64::max);
        let lo = last.iter().cloned().fold(f64::MAX, f64::min);
        hi - lo <= 0.1 * hi + 2.0 * h
    });
    if compact {
        out.rationale = "capture radii finite and stable for every eps".into();
        return Ok(out);
    }

    let step = 1e-12 * c2;
    let vanishing = ladder.iter().enumerate().all(|(i, &r)| {
        r > 0.125 * grid.box_length()
            || profiles[half..]
                .windows(2)
                .all(|w| w[1][i].0 < w[0][i].0 - step)
    });
    if vanishing {
        out.verdict = CCVerdict::Vanishing;
        out.centers = profiles.iter().map(|p| grid.point(p[0].1)).collect();
        out.rationale = "Q_n(R) strictly decreasing over the last half for every R <= L/8".into();
        return Ok(out);
    }

    // radii whose last-half Q is flat at an intermediate level
    let plateau: Vec<(usize, f64)> = (0..ladder.len())
        .filter_map(|i| {
            let qs: Vec<f64> = profiles[half..].iter().map(|p| p[i].0).collect();
            let hi = qs.iter().cloned().fold(f64::MIN, f64::max);
            let lo = qs.iter().cloned().fold(f64::MAX, f64::min);
            let level = qs.iter().sum::<f64>() / qs.len() as f64;
            (hi - lo <= eps_min && level > eps_max && level < c2 - eps_max).then_some((i, level))
        })
        .collect();
    let Some(&(_, a2)) = plateau.iter().max_by(|a, b| a.1.total_cmp(&b.1)) else {
        return Err(Error::Inconclusive(
            "neither compact, vanishing nor a stable intermediate plateau".into(),
        ));
    };
    // smallest plateau radius within eps/2 of the stabilized level, leaving
    // the other half of the budget for the annulus
    let (i0, _) = *plateau
        .iter()
        .find(|(_, level)| *level >= a2 - 0.5 * eps_min)
        .expect("the maximum is in the list");
    let r0 = ladder[i0];
    out.verdict = CCVerdict::Dichotomy;
    out.a2 = Some(a2);
    out.centers = profiles.iter().map(|p| grid.point(p[i0].1)).collect();
    out.splits = seq
        .fields()
        .par_iter()
        .zip(&out.centers)
        .map(|(u, y)| split_at(u, y, r0, eps_min))
        .collect::<Result<_>>()?;
    out.rationale = format!("Q_n({r0:.4}) stabilizes at {a2:.6} over the last half");
    Ok(out)
}

/// Largest `Rn` in `(2 R0, L/4]` with at most `eps` of mass on the annulus
/// `R0 <= |x - y| <= 2 Rn`, and the resulting split.
fn split_at(u: &Field, y: &Point, r0: f64, eps: f64) -> Result<Split> {
    let grid = *u.grid();
    let h = grid.spacing();
    let inner = ball_mass(u, y, r0);
    let mut rn = None;
    let mut r = 2.0 * r0 + h;
    while r <= 0.25 * grid.box_length() + 1e-12 {
        let annulus = ball_mass(u, y, 2.0 * r) - inner;
        if annulus <= eps {
            rn = Some((r, annulus));
        }
        r += h;
    }
    let (rn, annulus) = rn.ok_or_else(|| {
        Error::Inconclusive(format!("no Rn with annulus mass <= {eps} around R0 = {r0}"))
    })?;
    let (v, w) = split_sequence(u, y, r0, rn)?;
    Ok(Split {
        r0,
        rn,
        mass_v: v.mass(),
        mass_w: w.mass(),
        annulus_mass: annulus,
        surplus: frac_kinetic(u) - frac_kinetic(&v) - frac_kinetic(&w),
    })
}

/// Reference sequences with known concentration behavior.
pub mod synthetic {
    use super::*;
    use crate::field::{dilate, normalize_mass, Profile};

    /// `dilate(phi, lambda_n)` with `lambda_n` geometric from `lambda_start`
    /// down to the smallest dilation that still fits in the box.
    pub fn spreading(grid: Grid, profile: &Profile, lambda_start: f64, len: usize, c2: f64) -> Result<Vec<Field>> {
        let lambda_end = profile.support_radius() / (0.5 * grid.box_length());
        (0..len)
            .map(|n| {
                let t = n as f64 / (len - 1).max(1) as f64;
                let lambda = lambda_start * (lambda_end / lambda_start).powf(t);
                normalize_mass(&dilate(profile, lambda, grid)?, c2)
            })
            .collect()
    }

    /// `phi(x - n step e_1)`, wrapped periodically.
    pub fn moving_translates(grid: Grid, profile: &Profile, step: f64, len: usize, c2: f64) -> Result<Vec<Field>> {
        let base = normalize_mass(&profile.sample(grid)?, c2)?;
        Ok((0..len)
            .map(|n| translate(&base, [n as f64 * step, 0.0]))
            .collect())
    }

    /// Two copies of `phi` carrying `inner` and `1 - inner` of the mass,
    /// `d_n = d0 + n dd` apart along `e_1`.
    pub fn separating_bumps(
        grid: Grid,
        profile: &Profile,
        inner: f64,
        d0: f64,
        dd: f64,
        len: usize,
        c2: f64,
    ) -> Result<Vec<Field>> {
        let base = normalize_mass(&profile.sample(grid)?, 1.0)?;
        (1..=len)
            .map(|n| {
                let d = d0 + n as f64 * dd;
                let a = translate(&base, [-0.5 * d, 0.0]).scaled(inner.sqrt());
                let b = translate(&base, [0.5 * d, 0.0]).scaled((1.0 - inner).sqrt());
                normalize_mass(&a.add_scaled(1.0, &b), c2)
            })
            .collect()
    }
}
