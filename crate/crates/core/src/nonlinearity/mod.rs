//! Local nonlinearities `F(x, t)`, their periodic comparison `F^inf(x, t)`,
//! and lattice verifiers for the structural hypotheses the existence theory
//! places on them.
//!
//! Built-in families:
//!
//! | family               | `F(x, t)`                                        |
//! |----------------------|--------------------------------------------------|
//! | `pure_power`         | `|t|^{l+2} / (l+2)`                              |
//! | `weighted_power`     | `delta (1 + |x|^2)^{-p/2} |t|^alpha`             |
//! | `periodic_power`     | `a(x) |t|^{sigma+2} / (sigma+2)`, `a` 1-periodic |
//! | `perturbed_periodic` | `a(x) |t|^{sigma+2} / (sigma+2) + g(x) t^2`      |
//! | `user_tabulated`     | bilinear in `(|x|, t)` between table nodes       |

mod hypotheses;

pub use hypotheses::{
    check_cutoff_bounds, check_hypotheses, CutoffViolation, Hypothesis, HypothesisOutcome,
    HypothesisReport, ParameterCheck, SamplePlan, Verdict, Witness,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Grid, Point};

fn norm(x: &Point, dim: usize) -> f64 {
    x[..dim].iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Closed-form `a(x)` with period 1 along every axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PeriodicCoefficient {
    Constant { value: f64 },
    /// `mean + amplitude * (1/N) sum_i cos(2 pi x_i)`
    Cosine { mean: f64, amplitude: f64 },
}

impl PeriodicCoefficient {
    pub fn eval(&self, x: &Point, dim: usize) -> f64 {
        match *self {
            PeriodicCoefficient::Constant { value } => value,
            PeriodicCoefficient::Cosine { mean, amplitude } => {
                let avg = x[..dim]
                    .iter()
                    .map(|c| (2.0 * std::f64::consts::PI * c).cos())
                    .sum::<f64>()
                    / dim as f64;
                mean + amplitude * avg
            }
        }
    }

    fn min_value(&self) -> f64 {
        match *self {
            PeriodicCoefficient::Constant { value } => value,
            PeriodicCoefficient::Cosine { mean, amplitude } => mean - amplitude.abs(),
        }
    }
}

/// Closed-form perturbation `g(x) >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Envelope {
    /// `amplitude * exp(-|x|^2 / width^2)`
    Gaussian { amplitude: f64, width: f64 },
    Constant { value: f64 },
}

impl Envelope {
    pub fn eval(&self, x: &Point, dim: usize) -> f64 {
        match *self {
            Envelope::Gaussian { amplitude, width } => {
                let r = norm(x, dim);
                amplitude * (-(r * r) / (width * width)).exp()
            }
            Envelope::Constant { value } => value,
        }
    }
}

/// `F` sampled on a `(|x|, t)` lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    /// Increasing `|x|` nodes; a single node makes `F` independent of `x`.
    pub radii: Vec<f64>,
    /// Increasing `t` nodes.
    pub t_nodes: Vec<f64>,
    /// `values[i][j] = F(radii[i], t_nodes[j])`.
    pub values: Vec<Vec<f64>>,
}

impl Table {
    fn validate(&self) -> Result<()> {
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
        if self.radii.is_empty() || self.t_nodes.len() < 2 {
            return Err(Error::invariant("table needs >= 1 radius and >= 2 t nodes"));
        }
        if !increasing(&self.radii) || !increasing(&self.t_nodes) {
            return Err(Error::invariant("table nodes must be strictly increasing"));
        }
        if self.values.len() != self.radii.len()
            || self.values.iter().any(|row| row.len() != self.t_nodes.len())
        {
            return Err(Error::invariant("table values must be radii x t_nodes"));
        }
        if self.values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invariant("table values must be finite"));
        }
        Ok(())
    }

    /// Bracketing cell and fractional position of `v` in `nodes`.
    fn locate(nodes: &[f64], v: f64, axis: &'static str) -> Result<(usize, f64)> {
        let (first, last) = (nodes[0], nodes[nodes.len() - 1]);
        if !(v >= first && v <= last) {
            return Err(Error::TabulationRange { axis, value: v });
        }
        let i = match nodes.partition_point(|&n| n <= v) {
            0 => 0,
            p if p >= nodes.len() => nodes.len() - 2,
            p => p - 1,
        };
        Ok((i, (v - nodes[i]) / (nodes[i + 1] - nodes[i])))
    }

    /// Value and `t`-slope of the bilinear interpolant.
    fn eval(&self, r: f64, t: f64) -> Result<(f64, f64)> {
        let (j, ft) = Self::locate(&self.t_nodes, t, "t")?;
        let nodes = &self.t_nodes;
        let row = |i: usize| {
            let v = &self.values[i];
            let slope = |k: usize| (v[k + 1] - v[k]) / (nodes[k + 1] - nodes[k]);
            // on an interior node the slope is the mean of both cells
            let ds = if ft == 0.0 && j > 0 {
                0.5 * (slope(j - 1) + slope(j))
            } else {
                slope(j)
            };
            (v[j] + ft * (v[j + 1] - v[j]), ds)
        };
        if self.radii.len() == 1 {
            return Ok(row(0));
        }
        let (i, fr) = Self::locate(&self.radii, r, "|x|")?;
        let (a, da) = row(i);
        let (b, db) = row(i + 1);
        Ok((a + fr * (b - a), da + fr * (db - da)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    PurePower,
    WeightedPower,
    PeriodicPower {
        coefficient: PeriodicCoefficient,
    },
    PerturbedPeriodic {
        coefficient: PeriodicCoefficient,
        envelope: Envelope,
    },
    UserTabulated {
        table: Table,
    },
}

/// A nonlinearity together with the exponents and constants the hypothesis
/// verifiers use. Serialized as one flat JSON object tagged by `family`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct NonlinearitySpec {
    #[serde(flatten)]
    pub family: Family,
    /// Growth exponent: `F <= A (t^2 + |t|^{ell+2})`.
    pub ell: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub sigma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_prime: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_prime: Option<f64>,
    pub delta_f1: f64,
    pub p_f1: f64,
    pub r_f1: f64,
    pub s_f1: f64,
}

/// Wire form with every exponent optional; defaults depend on the family.
#[derive(Debug, Clone, Deserialize)]
struct RawSpec {
    #[serde(flatten)]
    family: Family,
    ell: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
    sigma: Option<f64>,
    a: Option<f64>,
    a_prime: Option<f64>,
    b: Option<f64>,
    b_prime: Option<f64>,
    delta_f1: Option<f64>,
    p_f1: Option<f64>,
    r_f1: Option<f64>,
    s_f1: Option<f64>,
}

impl TryFrom<RawSpec> for NonlinearitySpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        let missing = |name: &str| Error::Schema {
            path: name.to_string(),
            message: "required for this family".into(),
        };
        // growth exponent of the family
        let ell = match &raw.family {
            Family::PurePower | Family::UserTabulated { .. } => {
                raw.ell.ok_or_else(|| missing("ell"))?
            }
            Family::WeightedPower => match (raw.ell, raw.alpha) {
                (Some(l), _) => l,
                (None, Some(a)) => a - 2.0,
                (None, None) => return Err(missing("alpha")),
            },
            Family::PeriodicPower { .. } | Family::PerturbedPeriodic { .. } => raw
                .ell
                .or(raw.sigma)
                .ok_or_else(|| missing("sigma"))?,
        };
        let sigma = raw.sigma.unwrap_or(ell);
        let alpha = raw.alpha.unwrap_or(match raw.family {
            Family::PeriodicPower { .. } | Family::PerturbedPeriodic { .. } => sigma + 2.0,
            _ => ell + 2.0,
        });
        let default_delta = match &raw.family {
            Family::PurePower | Family::UserTabulated { .. } => 0.5 / (ell + 2.0),
            Family::WeightedPower => 1.0,
            Family::PeriodicPower { coefficient } | Family::PerturbedPeriodic { coefficient, .. } => {
                let m = coefficient.min_value();
                if m > 0.0 {
                    0.5 * m / (sigma + 2.0)
                } else {
                    1e-3
                }
            }
        };
        let spec = NonlinearitySpec {
            family: raw.family,
            ell,
            alpha,
            beta: raw.beta.unwrap_or(ell),
            gamma: raw.gamma.unwrap_or(0.5 * ell),
            sigma,
            a: raw.a,
            a_prime: raw.a_prime,
            b: raw.b,
            b_prime: raw.b_prime,
            delta_f1: raw.delta_f1.unwrap_or(default_delta),
            p_f1: raw.p_f1.unwrap_or(0.0),
            r_f1: raw.r_f1.unwrap_or(1.0),
            s_f1: raw.s_f1.unwrap_or(1.0),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl NonlinearitySpec {
    /// Parses the flat JSON form, keeping typed errors: a broken rule comes
    /// back as [`Error::InvariantViolation`] rather than a decode error.
    pub fn from_json(value: serde_json::Value) -> Result<Self> {
        let raw: RawSpec = serde_path_to_error::deserialize(value).map_err(|e| Error::Schema {
            path: e.path().to_string(),
            message: e.into_inner().to_string(),
        })?;
        NonlinearitySpec::try_from(raw)
    }

    fn with_family(family: Family, ell: f64) -> Self {
        NonlinearitySpec {
            family,
            ell,
            alpha: ell + 2.0,
            beta: ell,
            gamma: 0.5 * ell,
            sigma: ell,
            a: None,
            a_prime: None,
            b: None,
            b_prime: None,
            delta_f1: 0.5 / (ell + 2.0),
            p_f1: 0.0,
            r_f1: 1.0,
            s_f1: 1.0,
        }
    }

    /// `F = |t|^{ell+2} / (ell+2)`.
    pub fn pure_power(ell: f64) -> Self {
        Self::with_family(Family::PurePower, ell)
    }

    /// `F = delta (1 + |x|^2)^{-p/2} |t|^alpha`.
    pub fn weighted_power(delta: f64, p: f64, alpha: f64) -> Self {
        let mut spec = Self::with_family(Family::WeightedPower, alpha - 2.0);
        spec.alpha = alpha;
        spec.delta_f1 = delta;
        spec.p_f1 = p;
        spec
    }

    /// `F = a(x) |t|^{sigma+2} / (sigma+2)`.
    pub fn periodic_power(sigma: f64, coefficient: PeriodicCoefficient) -> Self {
        let mut spec = Self::with_family(Family::PeriodicPower { coefficient }, sigma);
        spec.alpha = sigma + 2.0;
        spec.delta_f1 = (0.5 * coefficient.min_value() / (sigma + 2.0)).max(1e-3);
        spec
    }

    /// `F = a(x) |t|^{sigma+2} / (sigma+2) + g(x) t^2`.
    pub fn perturbed_periodic(
        sigma: f64,
        coefficient: PeriodicCoefficient,
        envelope: Envelope,
    ) -> Self {
        let mut spec = Self::periodic_power(sigma, coefficient);
        spec.family = Family::PerturbedPeriodic {
            coefficient,
            envelope,
        };
        spec
    }

    pub fn tabulated(table: Table, ell: f64) -> Self {
        Self::with_family(Family::UserTabulated { table }, ell)
    }

    /// `F = 0`, the kinetic-only problem.
    pub fn zero() -> Self {
        Self::periodic_power(1.0, PeriodicCoefficient::Constant { value: 0.0 })
    }

    /// `F = t^2`.
    pub fn quadratic() -> Self {
        Self::perturbed_periodic(
            1.0,
            PeriodicCoefficient::Constant { value: 0.0 },
            Envelope::Constant { value: 1.0 },
        )
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::PurePower => "pure_power",
            Family::WeightedPower => "weighted_power",
            Family::PeriodicPower { .. } => "periodic_power",
            Family::PerturbedPeriodic { .. } => "perturbed_periodic",
            Family::UserTabulated { .. } => "user_tabulated",
        }
    }

    /// Grid-independent parameter rules.
    pub fn validate(&self) -> Result<()> {
        if !(0.0..2.0).contains(&self.p_f1) {
            return Err(Error::invariant("p ∈ [0,2)"));
        }
        if !(self.delta_f1 > 0.0) {
            return Err(Error::invariant("delta_F1 > 0"));
        }
        if !(self.r_f1 > 0.0) {
            return Err(Error::invariant("R_F1 > 0"));
        }
        if !(self.s_f1 > 0.0) {
            return Err(Error::invariant("S_F1 > 0"));
        }
        if let Family::UserTabulated { table } = &self.family {
            table.validate()?;
        }
        Ok(())
    }

    /// Rules that involve the grid's `N` and `s`: `0 < ell < 4s/N` and the
    /// (F1) window `N + 2s > (N/2) alpha + p`.
    pub fn bind(&self, grid: &Grid) -> Result<()> {
        self.validate()?;
        grid.require_variational()?;
        if !(self.ell > 0.0 && self.ell < grid.critical_exponent()) {
            return Err(Error::invariant(format!(
                "ell < 4s/N (ell = {}, 4s/N = {})",
                self.ell,
                grid.critical_exponent()
            )));
        }
        let n = grid.dim() as f64;
        if !(n + 2.0 * grid.s() > 0.5 * n * self.alpha + self.p_f1) {
            return Err(Error::invariant("N + 2s > (N/2) alpha + p"));
        }
        Ok(())
    }

    /// `F(x, t)`.
    pub fn eval_f(&self, x: &Point, dim: usize, t: f64) -> Result<f64> {
        Ok(match &self.family {
            Family::PurePower => {
                let q = self.ell + 2.0;
                t.abs().powf(q) / q
            }
            Family::WeightedPower => {
                let r2 = norm(x, dim).powi(2);
                self.delta_f1 * (1.0 + r2).powf(-0.5 * self.p_f1) * t.abs().powf(self.alpha)
            }
            Family::PeriodicPower { coefficient } => {
                let q = self.sigma + 2.0;
                coefficient.eval(x, dim) * t.abs().powf(q) / q
            }
            Family::PerturbedPeriodic {
                coefficient,
                envelope,
            } => {
                let q = self.sigma + 2.0;
                coefficient.eval(x, dim) * t.abs().powf(q) / q + envelope.eval(x, dim) * t * t
            }
            Family::UserTabulated { table } => table.eval(norm(x, dim), t)?.0,
        })
    }

    /// `d F / d t (x, t)`.
    pub fn eval_df(&self, x: &Point, dim: usize, t: f64) -> Result<f64> {
        Ok(match &self.family {
            Family::PurePower => t.abs().powf(self.ell) * t,
            Family::WeightedPower => {
                if t == 0.0 {
                    return Ok(0.0);
                }
                let r2 = norm(x, dim).powi(2);
                self.delta_f1
                    * (1.0 + r2).powf(-0.5 * self.p_f1)
                    * self.alpha
                    * t.abs().powf(self.alpha - 1.0)
                    * t.signum()
            }
            Family::PeriodicPower { coefficient } => {
                coefficient.eval(x, dim) * t.abs().powf(self.sigma) * t
            }
            Family::PerturbedPeriodic {
                coefficient,
                envelope,
            } => {
                coefficient.eval(x, dim) * t.abs().powf(self.sigma) * t
                    + 2.0 * envelope.eval(x, dim) * t
            }
            Family::UserTabulated { table } => table.eval(norm(x, dim), t)?.1,
        })
    }

    /// The periodic comparison `F^inf` this family carries, if any: a pure
    /// or periodic power is its own, a perturbed periodic power drops `g`.
    pub fn infinity_part(&self) -> Option<NonlinearitySpec> {
        match &self.family {
            Family::PurePower | Family::PeriodicPower { .. } => Some(self.clone()),
            Family::PerturbedPeriodic { coefficient, .. } => {
                let mut spec = self.clone();
                spec.family = Family::PeriodicPower {
                    coefficient: *coefficient,
                };
                Some(spec)
            }
            Family::WeightedPower | Family::UserTabulated { .. } => None,
        }
    }
}

/// Piecewise-linear cutoff: 1 on `|t| < 1`, `2 - |t|` on `[1, 2]`, 0 beyond.
pub fn cutoff(t: f64) -> f64 {
    let a = t.abs();
    if a < 1.0 {
        1.0
    } else if a <= 2.0 {
        2.0 - a
    } else {
        0.0
    }
}

/// Splits `dF/dt` into a part supported on `|t| <= 2` and a part supported
/// on `|t| >= 1`.
///
/// The second part is computed as `dF - d1`, which makes `d1 + d2 = dF`
/// exact in floating point.
pub fn cutoff_split(spec: &NonlinearitySpec, x: &Point, dim: usize, t: f64) -> Result<(f64, f64)> {
    let df = spec.eval_df(x, dim, t)?;
    let d1 = cutoff(t) * df;
    Ok((d1, df - d1))
}

#[cfg(test)]
mod tests {
    use super::*;

    const O: Point = [0.0, 0.0];

    fn perturbed() -> NonlinearitySpec {
        NonlinearitySpec::perturbed_periodic(
            1.0,
            PeriodicCoefficient::Constant { value: 1.0 },
            Envelope::Gaussian {
                amplitude: 1.0,
                width: 1.0,
            },
        )
    }

    #[test]
    fn pure_power_closed_form() {
        let spec = NonlinearitySpec::pure_power(1.0);
        assert!((spec.eval_f(&O, 1, 2.0).unwrap() - 8.0 / 3.0).abs() < 1e-15);
        assert!((spec.eval_df(&O, 1, 2.0).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn every_family_vanishes_at_zero() {
        let table = Table {
            radii: vec![0.0],
            t_nodes: vec![-1.0, 0.0, 1.0],
            values: vec![vec![1.0, 0.0, 1.0]],
        };
        let specs = [
            NonlinearitySpec::pure_power(0.7),
            NonlinearitySpec::weighted_power(0.3, 1.0, 2.5),
            NonlinearitySpec::periodic_power(
                0.5,
                PeriodicCoefficient::Cosine {
                    mean: 1.0,
                    amplitude: 0.5,
                },
            ),
            perturbed(),
            NonlinearitySpec::tabulated(table, 1.0),
        ];
        for spec in &specs {
            for x in [[0.0, 0.0], [0.3, -2.0], [7.0, 1.0]] {
                assert_eq!(spec.eval_f(&x, 2, 0.0).unwrap(), 0.0, "{}", spec.family_name());
                assert_eq!(spec.eval_df(&x, 2, 0.0).unwrap(), 0.0, "{}", spec.family_name());
            }
        }
    }

    #[test]
    fn perturbed_periodic_sum_of_closed_forms() {
        assert!((perturbed().eval_f(&O, 1, 1.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        let inf = perturbed().infinity_part().unwrap();
        assert!((inf.eval_f(&O, 1, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn cutoff_split_cases() {
        let spec = NonlinearitySpec::pure_power(1.0);
        for t in [0.0, 0.3, -0.99, 1.0] {
            let (_, d2) = cutoff_split(&spec, &O, 1, t).unwrap();
            assert_eq!(d2, 0.0);
        }
        for t in [2.0, -2.5, 10.0] {
            let (d1, _) = cutoff_split(&spec, &O, 1, t).unwrap();
            assert_eq!(d1, 0.0);
        }
        let df = spec.eval_df(&O, 1, 1.5).unwrap();
        let (d1, d2) = cutoff_split(&spec, &O, 1, 1.5).unwrap();
        assert_eq!(d1, 0.5 * df);
        assert_eq!(d2, 0.5 * df);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let specs = [
            NonlinearitySpec::pure_power(1.0),
            NonlinearitySpec::pure_power(0.4),
            NonlinearitySpec::weighted_power(0.7, 1.5, 2.5),
            perturbed(),
        ];
        let step = 1e-5;
        for spec in &specs {
            for x in [[0.0, 0.0], [1.3, 0.0], [-4.0, 0.0]] {
                let mut t = 1e-2;
                while t <= 10.0 {
                    for tt in [t, -t] {
                        let fd = (spec.eval_f(&x, 1, tt + step).unwrap()
                            - spec.eval_f(&x, 1, tt - step).unwrap())
                            / (2.0 * step);
                        let df = spec.eval_df(&x, 1, tt).unwrap();
                        assert!(
                            (fd - df).abs() <= 1e-6 * df.abs().max(1e-12),
                            "{} at t = {tt}: {fd} vs {df}",
                            spec.family_name()
                        );
                    }
                    t *= 1.7;
                }
            }
        }
    }

    #[test]
    fn tabulated_is_bilinear_and_range_checked() {
        let table = Table {
            radii: vec![0.0, 2.0],
            t_nodes: vec![0.0, 1.0, 2.0],
            values: vec![vec![0.0, 1.0, 4.0], vec![0.0, 3.0, 6.0]],
        };
        let spec = NonlinearitySpec::tabulated(table, 1.0);
        let v = spec.eval_f(&[1.0, 0.0], 1, 1.5).unwrap();
        // rows at t = 1.5: 2.5 and 4.5, halfway in |x|
        assert!((v - 3.5).abs() < 1e-15);
        assert!((spec.eval_df(&[0.0, 0.0], 1, 1.5).unwrap() - 3.0).abs() < 1e-15);
        assert!((spec.eval_df(&[0.0, 0.0], 1, 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(
            spec.eval_f(&[0.0, 0.0], 1, 2.5),
            Err(Error::TabulationRange { axis: "t", .. })
        ));
        assert!(matches!(
            spec.eval_f(&[3.0, 0.0], 1, 0.5),
            Err(Error::TabulationRange { axis: "|x|", .. })
        ));
    }

    #[test]
    fn json_defaults_and_rules() {
        let spec: NonlinearitySpec =
            serde_json::from_str(r#"{"family":"pure_power","ell":1}"#).unwrap();
        assert_eq!(spec, NonlinearitySpec::pure_power(1.0));
        let back: NonlinearitySpec =
            serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
        let err = serde_json::from_str::<NonlinearitySpec>(
            r#"{"family":"pure_power","ell":1,"p_f1":2.5}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("p ∈ [0,2)"), "{err}");
        let p: NonlinearitySpec = serde_json::from_str(
            r#"{"family":"perturbed_periodic","sigma":1,
                "coefficient":{"kind":"constant","value":1},
                "envelope":{"kind":"gaussian","amplitude":1,"width":1}}"#,
        )
        .unwrap();
        assert_eq!(p, perturbed());
        let err = NonlinearitySpec::from_json(serde_json::json!({
            "family": "pure_power", "ell": 1, "p_f1": 2.5
        }))
        .unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { ref rule } if rule == "p ∈ [0,2)"));
        let err = NonlinearitySpec::from_json(serde_json::json!({"family": "pure_power"})).unwrap_err();
        assert!(matches!(err, Error::Schema { ref path, .. } if path == "ell"));
    }

    #[test]
    fn binding_enforces_subcritical_growth() {
        let g = Grid::line(40.0, 64, 0.5).unwrap();
        assert!(NonlinearitySpec::pure_power(1.0).bind(&g).is_ok());
        let err = NonlinearitySpec::pure_power(3.0).bind(&g).unwrap_err();
        assert!(err.to_string().contains("ell < 4s/N"));
        // alpha = 4 breaks the (F1) window 1 + 1 > 2 + p
        let w = NonlinearitySpec::weighted_power(1.0, 0.0, 4.0);
        assert!(w.bind(&Grid::line(40.0, 64, 0.9).unwrap()).is_err());
    }
}
