//! Periodic-box discretization of `R^N` (`N` = 1 or 2) and real fields on it.
//!
//! The box is `[-L/2, L/2)^N` sampled at `M` points per axis. Node `j` on an
//! axis sits at `-L/2 + j h` with `h = L / M`. Flattened indices are
//! row-major: for `N = 2` the node `(j0, j1)` lives at `j0 * M + j1`.

mod gagliardo;
pub mod io;
mod profile;
mod spectral;

pub use gagliardo::{gagliardo_kinetic_1d, gagliardo_constant};
pub use profile::{dilate, Profile, ProfileKind};
pub use spectral::{
    align, dft_forward, dft_inverse, frac_kinetic, frac_laplacian_apply, free_space_kinetic, hminus_norm,
    translate,
    Spectrum,
};
pub(crate) use spectral::ops_for;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid point in physical coordinates; the second entry is unused when `N = 1`.
pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridParams", into = "GridParams")]
pub struct Grid {
    dim: usize,
    box_length: f64,
    points_per_dim: usize,
    s: f64,
}

/// Unvalidated grid parameters, the serialized form of [`Grid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridParams {
    pub dim: usize,
    pub box_length: f64,
    pub points_per_dim: usize,
    pub s: f64,
}

impl TryFrom<GridParams> for Grid {
    type Error = Error;

    fn try_from(p: GridParams) -> Result<Self> {
        Grid::new(p.dim, p.box_length, p.points_per_dim, p.s)
    }
}

impl From<Grid> for GridParams {
    fn from(g: Grid) -> Self {
        GridParams {
            dim: g.dim,
            box_length: g.box_length,
            points_per_dim: g.points_per_dim,
            s: g.s,
        }
    }
}

impl Grid {
    pub fn new(dim: usize, box_length: f64, points_per_dim: usize, s: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGrid(format!("dim must be 1 or 2, got {dim}")));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "box_length must be positive, got {box_length}"
            )));
        }
        if points_per_dim < 2 || points_per_dim % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "points_per_dim must be even and >= 2, got {points_per_dim}"
            )));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::InvalidGrid(format!("s must lie in (0, 1), got {s}")));
        }
        Ok(Grid {
            dim,
            box_length,
            points_per_dim,
            s,
        })
    }

    /// The variational problem needs `N >= 2s`; the kinetic operators alone
    /// are defined for every `s` in `(0, 1)`, so this is checked when a
    /// grid is bound to an energy rather than at construction.
    pub fn require_variational(&self) -> Result<()> {
        if (self.dim as f64) < 2.0 * self.s {
            return Err(Error::invariant(format!(
                "N >= 2s (N = {}, s = {})",
                self.dim, self.s
            )));
        }
        Ok(())
    }

    /// One-dimensional grid, the common case.
    pub fn line(box_length: f64, points: usize, s: f64) -> Result<Self> {
        Grid::new(1, box_length, points, s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn points_per_dim(&self) -> usize {
        self.points_per_dim
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn spacing(&self) -> f64 {
        self.box_length / self.points_per_dim as f64
    }

    /// `h^N`, the quadrature weight of one node.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn len(&self) -> usize {
        self.points_per_dim.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Mass-subcritical threshold `4s/N`.
    pub fn critical_exponent(&self) -> f64 {
        4.0 * self.s / self.dim as f64
    }

    /// Fractional Sobolev exponent `2N/(N - 2s)`; infinite when `N = 2s`.
    pub fn sobolev_exponent(&self) -> f64 {
        let n = self.dim as f64;
        if n - 2.0 * self.s <= 0.0 {
            f64::INFINITY
        } else {
            2.0 * n / (n - 2.0 * self.s)
        }
    }

    pub fn same_shape(&self, other: &Grid) -> bool {
        self == other
    }

    /// Per-axis node indices of a flat index.
    pub fn multi_index(&self, flat: usize) -> [usize; 2] {
        let m = self.points_per_dim;
        if self.dim == 1 {
            [flat, 0]
        } else {
            [flat / m, flat % m]
        }
    }

    pub fn flat_index(&self, idx: [usize; 2]) -> usize {
        if self.dim == 1 {
            idx[0]
        } else {
            idx[0] * self.points_per_dim + idx[1]
        }
    }

    pub fn coordinate(&self, j: usize) -> f64 {
        -0.5 * self.box_length + j as f64 * self.spacing()
    }

    pub fn point(&self, flat: usize) -> Point {
        let idx = self.multi_index(flat);
        let mut p = [0.0; 2];
        for (axis, coord) in p.iter_mut().enumerate().take(self.dim) {
            *coord = self.coordinate(idx[axis]);
        }
        p
    }

    /// Signed integer frequency of DFT bin `k`, in `[-M/2, M/2 - 1]`.
    pub fn frequency_index(&self, k: usize) -> i64 {
        let m = self.points_per_dim as i64;
        let k = k as i64;
        if k < m / 2 {
            k
        } else {
            k - m
        }
    }

    /// `|xi_k|` for a flat spectral index, with `xi = 2 pi k / L` per axis.
    pub fn wavenumber_norm(&self, flat: usize) -> f64 {
        let idx = self.multi_index(flat);
        let scale = 2.0 * std::f64::consts::PI / self.box_length;
        let mut sq = 0.0;
        for axis in 0..self.dim {
            let xi = scale * self.frequency_index(idx[axis]) as f64;
            sq += xi * xi;
        }
        sq.sqrt()
    }

    /// Shortest periodic displacement between two nodes, per axis.
    pub fn torus_offset(&self, from: usize, to: usize) -> Point {
        let a = self.multi_index(from);
        let b = self.multi_index(to);
        let m = self.points_per_dim as i64;
        let h = self.spacing();
        let mut d = [0.0; 2];
        for axis in 0..self.dim {
            let mut k = (b[axis] as i64 - a[axis] as i64).rem_euclid(m);
            if k > m / 2 {
                k -= m;
            }
            d[axis] = k as f64 * h;
        }
        d
    }

    pub fn torus_distance(&self, from: usize, to: usize) -> f64 {
        let d = self.torus_offset(from, to);
        (d[0] * d[0] + d[1] * d[1]).sqrt()
    }

    /// Volume of the ball of radius `r` on the continuum, `|B_r|`.
    pub fn ball_volume(&self, r: f64) -> f64 {
        match self.dim {
            1 => 2.0 * r,
            _ => std::f64::consts::PI * r * r,
        }
    }
}

/// Real samples of a function on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidField(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidField(format!("non-finite value at node {j}")));
        }
        Ok(Field { grid, values })
    }

    /// Internal constructor for values already known to be finite.
    pub(crate) fn from_parts(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Field { grid, values }
    }

    pub fn zeros(grid: Grid) -> Self {
        Field::from_parts(grid, vec![0.0; grid.len()])
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        Field::from_parts(grid, vec![value; grid.len()])
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: Grid, f: impl Fn(&Point) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|j| f(&grid.point(j))).collect();
        Field::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `h^N sum u_j^2`.
    pub fn mass(&self) -> f64 {
        self.grid.cell_volume() * self.values.iter().map(|v| v * v).sum::<f64>()
    }

    pub fn l2_norm(&self) -> f64 {
        self.mass().sqrt()
    }

    pub fn lp_norm(&self, r: f64) -> f64 {
        if r.is_infinite() {
            return self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        }
        let sum: f64 = self.values.iter().map(|v| v.abs().powf(r)).sum();
        (self.grid.cell_volume() * sum).powf(1.0 / r)
    }

    /// Discrete L^2 inner product `h^N sum u_j v_j`.
    pub fn inner(&self, other: &Field) -> f64 {
        debug_assert!(self.grid.same_shape(&other.grid));
        self.grid.cell_volume()
            * self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .sum::<f64>()
    }

    pub fn scaled(&self, factor: f64) -> Field {
        Field::from_parts(self.grid, self.values.iter().map(|v| v * factor).collect())
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: f64, other: &Field) -> Field {
        debug_assert!(self.grid.same_shape(&other.grid));
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + factor * b)
            .collect();
        Field::from_parts(self.grid, values)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field::from_parts(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Mass, kinetic energy, `H^s` norm and a few `L^r` norms.
    pub fn norms(&self) -> NormBundle {
        let mass = self.mass();
        let kinetic = frac_kinetic(self);
        let mut lp_norms = BTreeMap::new();
        for r in [2.0, 3.0, 4.0] {
            lp_norms.insert(format!("{r}"), self.lp_norm(r));
        }
        let crit = 2.0 + self.grid.critical_exponent();
        lp_norms.insert(format!("{crit}"), self.lp_norm(crit));
        NormBundle {
            mass,
            kinetic,
            hs_norm: (mass + kinetic).sqrt(),
            lp_norms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormBundle {
    pub mass: f64,
    /// `|grad_s u|_2^2` in its Fourier-multiplier form.
    pub kinetic: f64,
    pub hs_norm: f64,
    /// Keyed by the exponent printed as a decimal.
    pub lp_norms: BTreeMap<String, f64>,
}

/// `|u|_{H^s} = sqrt(mass + kinetic)`.
pub fn hs_norm(u: &Field) -> f64 {
    (u.mass() + frac_kinetic(u)).sqrt()
}

/// Rescales `u` onto the sphere `{ mass = c2 }`.
pub fn normalize_mass(u: &Field, c2: f64) -> Result<Field> {
    let mass = u.mass();
    if mass <= 0.0 || !mass.is_finite() {
        return Err(Error::ZeroField);
    }
    if !(c2 > 0.0) {
        return Err(Error::invariant("c2 > 0"));
    }
    Ok(u.scaled((c2 / mass).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rejects_bad_parameters() {
        assert!(Grid::new(3, 10.0, 16, 0.5).is_err());
        assert!(Grid::new(1, 10.0, 15, 0.5).is_err());
        assert!(Grid::new(1, -1.0, 16, 0.5).is_err());
        assert!(Grid::new(1, 10.0, 16, 1.0).is_err());
        assert!(Grid::new(1, 10.0, 16, 0.0).is_err());
        // N >= 2s only gates the variational problem
        let g = Grid::new(1, 10.0, 16, 0.75).unwrap();
        assert!(g.require_variational().is_err());
        assert!(Grid::new(2, 10.0, 16, 0.75).unwrap().require_variational().is_ok());
    }

    #[test]
    fn grid_geometry() {
        let g = Grid::line(40.0, 512, 0.5).unwrap();
        assert_eq!(g.spacing(), 40.0 / 512.0);
        assert_eq!(g.coordinate(0), -20.0);
        assert_eq!(g.coordinate(256), 0.0);
        assert_eq!(g.frequency_index(255), 255);
        assert_eq!(g.frequency_index(256), -256);
        assert_eq!(g.frequency_index(511), -1);
        assert!(g.sobolev_exponent().is_infinite());
        let g2 = Grid::new(2, 20.0, 8, 0.5).unwrap();
        assert_eq!(g2.len(), 64);
        assert_eq!(g2.multi_index(13), [1, 5]);
        assert_eq!(g2.flat_index([1, 5]), 13);
        assert!((g2.torus_distance(0, 7) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn normalize_mass_cases() {
        let g = Grid::line(4.0, 4, 0.5).unwrap();
        // h = 1: mass is the plain sum of squares
        let u = Field::new(g, vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(u.mass(), 4.0);
        assert_eq!(normalize_mass(&u, 4.0).unwrap(), u);
        let v = Field::new(g, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(normalize_mass(&v, 9.0).unwrap().values(), &[3.0, 0.0, 0.0, 0.0]);
        assert!(matches!(normalize_mass(&Field::zeros(g), 1.0), Err(Error::ZeroField)));
    }

    #[test]
    fn field_rejects_non_finite() {
        let g = Grid::line(4.0, 4, 0.5).unwrap();
        assert!(Field::new(g, vec![0.0, f64::NAN, 0.0, 0.0]).is_err());
        assert!(Field::new(g, vec![0.0; 3]).is_err());
    }

    #[test]
    fn grid_serde_validates() {
        let ok: Grid =
            serde_json::from_str(r#"{"dim":1,"box_length":40.0,"points_per_dim":512,"s":0.5}"#)
                .unwrap();
        assert_eq!(ok.points_per_dim(), 512);
        let bad = serde_json::from_str::<Grid>(
            r#"{"dim":1,"box_length":40.0,"points_per_dim":511,"s":0.5}"#,
        );
        assert!(bad.is_err());
    }
}
