use serde::{Deserialize, Serialize};

use super::{Field, Grid, Point};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    /// `exp(-|x|^2)`
    Gaussian,
    /// `sech(|x|)^2`
    SechSquared,
    /// `(1 + |x|^2)^{-2}`
    RationalBump,
}

impl ProfileKind {
    /// Radius beyond which the unit profile is treated as zero.
    pub fn default_support_radius(self) -> f64 {
        match self {
            // exp(-25) ~ 1.4e-11
            ProfileKind::Gaussian => 5.0,
            // 4 exp(-26) ~ 2e-11
            ProfileKind::SechSquared => 13.0,
            // (1 + 900)^{-2} ~ 1.2e-6, algebraic tails never truly vanish
            ProfileKind::RationalBump => 30.0,
        }
    }

    fn eval_radial(self, r: f64) -> f64 {
        match self {
            ProfileKind::Gaussian => (-r * r).exp(),
            ProfileKind::SechSquared => {
                let c = r.cosh();
                1.0 / (c * c)
            }
            ProfileKind::RationalBump => (1.0 + r * r).powi(-2),
        }
    }
}

/// A closed-form, nonnegative, radially decreasing bump
/// `amplitude * phi(|x - center|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub kind: ProfileKind,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default)]
    pub center: Point,
    /// Overrides [`ProfileKind::default_support_radius`].
    #[serde(default)]
    pub support_radius: Option<f64>,
}

fn one() -> f64 {
    1.0
}

impl Profile {
    pub fn new(kind: ProfileKind) -> Self {
        Profile {
            kind,
            amplitude: 1.0,
            center: [0.0; 2],
            support_radius: None,
        }
    }

    pub fn gaussian() -> Self {
        Profile::new(ProfileKind::Gaussian)
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn centered_at(mut self, center: Point) -> Self {
        self.center = center;
        self
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
            .unwrap_or_else(|| self.kind.default_support_radius())
    }

    /// Value at `x`, measured on the plane (no periodic wrap).
    pub fn eval(&self, x: &Point, dim: usize) -> f64 {
        let mut r2 = 0.0;
        for axis in 0..dim {
            let d = x[axis] - self.center[axis];
            r2 += d * d;
        }
        self.amplitude * self.kind.eval_radial(r2.sqrt())
    }

    /// Sample on the grid without dilation.
    pub fn sample(&self, grid: Grid) -> Result<Field> {
        dilate(self, 1.0, grid)
    }
}

/// Samples the mass-preserving dilation `lambda^{N/2} phi(lambda x)` (about
/// the profile center).
///
/// Fails with [`Error::ProfileOverflow`] when `support_radius / lambda`
/// (plus the center offset) exceeds `L/2`, which would alias the profile
/// across the periodic boundary.
pub fn dilate(profile: &Profile, lambda: f64, grid: Grid) -> Result<Field> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invariant("lambda > 0"));
    }
    let dim = grid.dim();
    let offset = profile.center[..dim]
        .iter()
        .fold(0.0f64, |m, c| m.max(c.abs()));
    let needed = profile.support_radius() / lambda + offset;
    let available = 0.5 * grid.box_length();
    if needed > available {
        return Err(Error::ProfileOverflow { needed, available });
    }
    let amp = lambda.powf(0.5 * dim as f64);
    Field::from_fn(grid, |x| {
        let mut y = [0.0; 2];
        for axis in 0..dim {
            y[axis] = profile.center[axis] + lambda * (x[axis] - profile.center[axis]);
        }
        amp * profile.eval(&y, dim)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::free_space_kinetic;

    #[test]
    fn unit_dilation_is_plain_sampling() {
        let g = Grid::line(30.0, 128, 0.5).unwrap();
        let p = Profile::new(ProfileKind::SechSquared).with_amplitude(2.0);
        let a = dilate(&p, 1.0, g).unwrap();
        let b = Field::from_fn(g, |x| 2.0 / x[0].cosh().powi(2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dilation_preserves_mass() {
        let g = Grid::line(40.0, 512, 0.5).unwrap();
        let p = Profile::gaussian();
        let m1 = p.sample(g).unwrap().mass();
        for lambda in [0.25, 0.5, 2.0] {
            let m = dilate(&p, lambda, g).unwrap().mass();
            assert!((m - m1).abs() / m1 < 1e-3);
        }
    }

    #[test]
    fn kinetic_scales_like_lambda_to_two_s() {
        let g = Grid::line(40.0, 512, 0.5).unwrap();
        let p = Profile::gaussian();
        let k1 = free_space_kinetic(&p.sample(g).unwrap());
        let kh = free_space_kinetic(&dilate(&p, 0.5, g).unwrap());
        assert!((kh / k1 - 0.5f64.powf(1.0)).abs() / 0.5 < 1e-3);
    }

    #[test]
    fn overflow_is_rejected() {
        let g = Grid::line(20.0, 128, 0.5).unwrap();
        let p = Profile::gaussian();
        assert!(dilate(&p, 0.5, g).is_ok());
        assert!(matches!(dilate(&p, 0.4, g), Err(Error::ProfileOverflow { .. })));
        assert!(dilate(&p.centered_at([6.0, 0.0]), 1.0, g).is_err());
    }
}
