//! Numerical experiments on the map `c -> I_c`: negativity by dilation,
//! mass scans, subadditivity and strict comparison with `I^inf`, and
//! scaling in the mass.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::energy::{energy, total_energy};
use crate::error::{Error, Result};
use crate::field::{dilate, free_space_kinetic, frac_kinetic, normalize_mass, Grid, Profile};
use crate::flow::{minimize, FlowConfig, MinimizerResult};
use crate::nonlinearity::NonlinearitySpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DilationVerdict {
    NegativeWitness,
    NoWitness,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DilationRow {
    pub lambda: f64,
    /// `J(phi_lambda)` with `phi_lambda` on the sphere of mass `c2`
    pub energy: f64,
    /// Periodic `|grad_s phi_lambda|^2`
    pub kinetic: f64,
    /// Whole-space `|grad_s phi_lambda|^2`
    pub free_kinetic: f64,
    /// `free_kinetic(lambda) / free_kinetic(1) / lambda^{2s} - 1`
    pub kinetic_law_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilationReport {
    pub c2: f64,
    pub rows: Vec<DilationRow>,
    /// Ladder entries whose dilate does not fit in the box.
    pub skipped: Vec<f64>,
    pub verdict: DilationVerdict,
    /// `lambda` with the lowest energy.
    pub best_lambda: f64,
    pub best_energy: f64,
}

impl DilationReport {
    pub fn max_kinetic_law_error(&self) -> f64 {
        self.rows
            .iter()
            .fold(0.0f64, |m, r| m.max(r.kinetic_law_error.abs()))
    }
}

/// Evaluates `J` along the dilations `phi_lambda = lambda^{N/2} phi(lambda x)`
/// of a profile placed on the sphere of mass `c2`.
///
/// Ladder entries that overflow the box are skipped and listed; the call
/// fails only when every entry overflows.
pub fn dilation_test(
    spec: &NonlinearitySpec,
    profile: &Profile,
    c2: f64,
    ladder: &[f64],
    grid: Grid,
) -> Result<DilationReport> {
    // one amplitude for the whole ladder keeps the kinetic law exact
    let unit = dilate(profile, 1.0, grid)?;
    let amp = (c2 / unit.mass()).sqrt();
    let k1 = free_space_kinetic(&unit);
    let two_s = 2.0 * grid.s();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let mut overflow = None;
    for &lambda in ladder {
        let phi = match dilate(profile, lambda, grid) {
            Ok(f) => f,
            Err(e @ Error::ProfileOverflow { .. }) => {
                skipped.push(lambda);
                overflow = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let free = free_space_kinetic(&phi);
        let on_sphere = normalize_mass(&phi.scaled(amp), c2)?;
        rows.push(DilationRow {
            lambda,
            energy: total_energy(&on_sphere, spec)?,
            kinetic: frac_kinetic(&on_sphere),
            free_kinetic: amp * amp * free,
            kinetic_law_error: free / k1 / lambda.powf(two_s) - 1.0,
        });
    }
    if rows.is_empty() {
        return Err(overflow.unwrap_or_else(|| Error::invariant("lambda ladder is empty")));
    }
    let best = rows
        .iter()
        .fold(rows[0], |b, r| if r.energy < b.energy { *r } else { b });
    Ok(DilationReport {
        c2,
        verdict: if best.energy < 0.0 {
            DilationVerdict::NegativeWitness
        } else {
            DilationVerdict::NoWitness
        },
        best_lambda: best.lambda,
        best_energy: best.energy,
        rows,
        skipped,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanPoint {
    pub c: f64,
    pub i: f64,
    pub converged: bool,
    pub residual: f64,
    pub restart_spread: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_inf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inf_converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inf_restart_spread: Option<f64>,
    #[serde(skip)]
    pub result: Option<MinimizerResult>,
    #[serde(skip)]
    pub inf_result: Option<MinimizerResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub points: Vec<ScanPoint>,
    /// `max_i |I_{c_{i+1}} - I_{c_i}|`
    pub max_adjacent_jump: f64,
    /// `max_i |I_{c_{i+1}} - I_{c_i}| / (c_{i+1} - c_i)`
    pub max_difference_quotient: f64,
}

impl ScanResult {
    pub fn c_values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.c).collect()
    }

    pub fn i_values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.i).collect()
    }

    pub fn i_inf_values(&self) -> Option<Vec<f64>> {
        self.points.iter().map(|p| p.i_inf).collect()
    }

    /// CSV rows `c,I_c,I_inf_c,converged`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["c", "I_c", "I_inf_c", "converged"])?;
        for p in &self.points {
            let conv = p.converged && p.inf_converged.unwrap_or(true);
            w.write_record([
                format!("{:?}", p.c),
                format!("{:?}", p.i),
                p.i_inf.map(|v| format!("{v:?}")).unwrap_or_default(),
                conv.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Minimizes `J` (and `J^inf` when `with_infinity`) at each mass `c^2`.
/// Points run in parallel and are reported in `c` order.
pub fn mass_scan(
    spec: &NonlinearitySpec,
    grid: Grid,
    c_values: &[f64],
    config: &FlowConfig,
    with_infinity: bool,
) -> Result<ScanResult> {
    if c_values.is_empty() || c_values.iter().any(|c| !(*c > 0.0)) {
        return Err(Error::invariant("c values > 0"));
    }
    if c_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invariant("c values sorted increasing"));
    }
    let finf = if with_infinity {
        Some(spec.infinity_part().ok_or(Error::MissingComparison("I_inf"))?)
    } else {
        None
    };
    let run = |c: f64, s: &NonlinearitySpec| {
        let cfg = FlowConfig {
            c2: c * c,
            ..config.clone()
        };
        minimize(s, grid, &cfg)
    };
    let points = c_values
        .par_iter()
        .map(|&c| {
            let r = run(c, spec)?;
            let inf = finf.as_ref().map(|g| run(c, g)).transpose()?;
            Ok(ScanPoint {
                c,
                i: r.report.total,
                converged: r.converged,
                residual: r.report.el_residual,
                restart_spread: r.restart_spread(),
                i_inf: inf.as_ref().map(|r| r.report.total),
                inf_converged: inf.as_ref().map(|r| r.converged),
                inf_restart_spread: inf.as_ref().map(|r| r.restart_spread()),
                result: Some(r),
                inf_result: inf,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut jump = 0.0f64;
    let mut quotient = 0.0f64;
    for w in points.windows(2) {
        let d = (w[1].i - w[0].i).abs();
        jump = jump.max(d);
        quotient = quotient.max(d / (w[1].c - w[0].c));
    }
    Ok(ScanResult {
        points,
        max_adjacent_jump: jump,
        max_difference_quotient: quotient,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubadditivityMode {
    /// `I_c <= I_a + I_b + tol`
    Plain,
    /// `I_c < I_a + I^inf_b - margin` and `I_c < I^inf_c - margin`
    Cross,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubadditivityOptions {
    pub tol: f64,
    /// Allow linear interpolation of off-grid values.
    pub interpolate: bool,
    /// Split as `b = c - a` instead of `b = sqrt(c^2 - a^2)`.
    pub linear_split: bool,
}

impl Default for SubadditivityOptions {
    fn default() -> Self {
        SubadditivityOptions {
            tol: 1e-6,
            interpolate: true,
            linear_split: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubadditivityRow {
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub i_c: f64,
    pub i_a: f64,
    /// `I_b` in plain mode, `I^inf_b` in cross mode
    pub i_b: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_inf_c: Option<f64>,
    /// Slack of the weakest inequality on this row; negative means violated.
    pub margin: f64,
    pub interpolated: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubadditivityReport {
    pub mode: SubadditivityMode,
    pub rows: Vec<SubadditivityRow>,
    /// Required gap for strict inequalities (cross mode).
    pub strict_margin: f64,
    pub worst_margin: f64,
    pub all_hold: bool,
}

/// Value of a scan column at `c`: exact node, or a flagged linear
/// interpolation between the bracketing nodes.
fn lookup(
    scan: &ScanResult,
    c: f64,
    column: impl Fn(&ScanPoint) -> Option<f64>,
    interpolate: bool,
) -> Result<(f64, bool)> {
    let pts = &scan.points;
    if let Some(p) = pts.iter().find(|p| (p.c - c).abs() <= 1e-12 * c) {
        return Ok((column(p).ok_or(Error::InsufficientScan(c))?, false));
    }
    if !interpolate {
        return Err(Error::InsufficientScan(c));
    }
    let hi = pts.iter().position(|p| p.c > c).ok_or(Error::InsufficientScan(c))?;
    if hi == 0 {
        return Err(Error::InsufficientScan(c));
    }
    let (p0, p1) = (&pts[hi - 1], &pts[hi]);
    let (v0, v1) = (
        column(p0).ok_or(Error::InsufficientScan(c))?,
        column(p1).ok_or(Error::InsufficientScan(c))?,
    );
    let t = (c - p0.c) / (p1.c - p0.c);
    Ok((v0 + t * (v1 - v0), true))
}

/// Checks the splitting inequalities at each `(c, a)` with `0 < a < c`.
pub fn subadditivity_check(
    scan: &ScanResult,
    pairs: &[(f64, f64)],
    mode: SubadditivityMode,
    options: SubadditivityOptions,
) -> Result<SubadditivityReport> {
    let strict_margin = match mode {
        SubadditivityMode::Plain => 0.0,
        SubadditivityMode::Cross => {
            2.0 * scan.points.iter().fold(0.0f64, |m, p| {
                m.max(p.restart_spread).max(p.inf_restart_spread.unwrap_or(0.0))
            })
        }
    };
    let mut rows = Vec::new();
    for &(c, a) in pairs {
        if !(a > 0.0 && a < c) {
            return Err(Error::invariant("0 < a < c"));
        }
        let b = if options.linear_split {
            c - a
        } else {
            (c * c - a * a).sqrt()
        };
        let interp = options.interpolate;
        let (i_c, f1) = lookup(scan, c, |p| Some(p.i), interp)?;
        let (i_a, f2) = lookup(scan, a, |p| Some(p.i), interp)?;
        let row = match mode {
            SubadditivityMode::Plain => {
                let (i_b, f3) = lookup(scan, b, |p| Some(p.i), interp)?;
                let margin = i_a + i_b + options.tol - i_c;
                SubadditivityRow {
                    c,
                    a,
                    b,
                    i_c,
                    i_a,
                    i_b,
                    i_inf_c: None,
                    margin,
                    interpolated: f1 || f2 || f3,
                    holds: margin >= 0.0,
                }
            }
            SubadditivityMode::Cross => {
                let (i_b, f3) = lookup(scan, b, |p| p.i_inf, interp)?;
                let (i_inf_c, f4) = lookup(scan, c, |p| p.i_inf, interp)?;
                let margin = (i_a + i_b - i_c).min(i_inf_c - i_c) - strict_margin;
                SubadditivityRow {
                    c,
                    a,
                    b,
                    i_c,
                    i_a,
                    i_b,
                    i_inf_c: Some(i_inf_c),
                    margin,
                    interpolated: f1 || f2 || f3 || f4,
                    holds: margin > 0.0,
                }
            }
        };
        rows.push(row);
    }
    let worst_margin = rows.iter().fold(f64::INFINITY, |m, r| m.min(r.margin));
    Ok(SubadditivityReport {
        mode,
        all_hold: rows.iter().all(|r| r.holds),
        rows,
        strict_margin,
        worst_margin,
    })
}

/// `I_c` against `I^inf_c` at a single mass: both minimizations and the
/// strict gap required by the restart spread.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrictComparison {
    pub c: f64,
    pub i_c: f64,
    pub i_inf_c: f64,
    pub gap: f64,
    pub strict_margin: f64,
    pub holds: bool,
}

pub fn strict_comparison(
    spec: &NonlinearitySpec,
    grid: Grid,
    c: f64,
    config: &FlowConfig,
) -> Result<StrictComparison> {
    let scan = mass_scan(spec, grid, &[c], config, true)?;
    let p = &scan.points[0];
    let i_inf = p.i_inf.expect("scan ran with the comparison");
    let strict_margin = 2.0 * p.restart_spread.max(p.inf_restart_spread.unwrap_or(0.0));
    let gap = i_inf - p.i;
    Ok(StrictComparison {
        c,
        i_c: p.i,
        i_inf_c: i_inf,
        gap,
        strict_margin,
        holds: gap > strict_margin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaRow {
    pub theta: f64,
    pub i_theta_c: f64,
    /// `theta^2 I_c`
    pub bound: f64,
    /// `theta^2 I_c - I_{theta c}`
    pub margin: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestVectorRow {
    pub theta: f64,
    /// `J(theta u)` for the minimizer `u` at mass `c^2`
    pub energy: f64,
    /// `theta^{sigma+2} J(u)`
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaReport {
    pub c: f64,
    pub i_c: f64,
    pub tol: f64,
    pub rows: Vec<ThetaRow>,
    pub test_vector: Vec<TestVectorRow>,
    pub all_hold: bool,
}

/// `I_{theta c} <= theta^2 I_c + tol` along a ladder in `[1, 4]`, plus the
/// direct check `J(theta u) <= theta^{sigma+2} J(u)` on the minimizer `u`.
///
/// `spec` is the functional being scaled (pass `F^inf` for the periodic
/// problem).
pub fn theta_scaling_check(
    spec: &NonlinearitySpec,
    grid: Grid,
    c: f64,
    thetas: &[f64],
    config: &FlowConfig,
    tol: f64,
) -> Result<ThetaReport> {
    if thetas.iter().any(|t| !(1.0..=4.0).contains(t)) {
        return Err(Error::invariant("theta ∈ [1,4]"));
    }
    let base = minimize(
        spec,
        grid,
        &FlowConfig {
            c2: c * c,
            ..config.clone()
        },
    )?;
    let i_c = base.report.total;
    if i_c >= 0.0 {
        return Err(Error::PrerequisiteFailed(format!(
            "I_c = {i_c} is not negative at c = {c}"
        )));
    }
    let others: Vec<f64> = thetas.iter().copied().filter(|&t| t != 1.0).collect();
    let scaled = others
        .par_iter()
        .map(|&t| {
            let cfg = FlowConfig {
                c2: (t * c).powi(2),
                ..config.clone()
            };
            minimize(spec, grid, &cfg).map(|r| r.report.total)
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<ThetaRow> = thetas
        .iter()
        .map(|&t| {
            let i_t = if t == 1.0 {
                i_c
            } else {
                scaled[others.iter().position(|&o| o == t).unwrap()]
            };
            let bound = t * t * i_c;
            ThetaRow {
                theta: t,
                i_theta_c: i_t,
                bound,
                margin: bound - i_t,
                holds: i_t <= bound + tol,
            }
        })
        .collect();
    let j_u = energy(&base.u_star, spec)?.total;
    let test_vector = thetas
        .iter()
        .map(|&t| {
            let e = total_energy(&base.u_star.scaled(t), spec)?;
            let bound = t.powf(spec.sigma + 2.0) * j_u;
            Ok(TestVectorRow {
                theta: t,
                energy: e,
                bound,
                holds: e <= bound + tol,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ThetaReport {
        c,
        i_c,
        tol,
        all_hold: rows.iter().all(|r| r.holds) && test_vector.iter().all(|r| r.holds),
        rows,
        test_vector,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinearity::{Envelope, PeriodicCoefficient};

    fn ladder() -> Vec<f64> {
        (0..=8).map(|k| 2f64.powi(-k)).collect()
    }

    #[test]
    fn kinetic_only_dilations_stay_positive() {
        let g = Grid::line(40.0, 512, 0.5).unwrap();
        let r = dilation_test(&NonlinearitySpec::zero(), &Profile::gaussian(), 1.0, &ladder(), g)
            .unwrap();
        assert_eq!(r.verdict, DilationVerdict::NoWitness);
        assert!(r.rows.iter().all(|row| row.energy > 0.0));
        // lambda = 1/4 is the smallest that fits
        assert_eq!(r.skipped, vec![0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625]);
    }

    #[test]
    fn cubic_dilations_turn_negative_and_obey_the_kinetic_law() {
        let g = Grid::line(160.0, 2048, 0.5).unwrap();
        let r = dilation_test(&NonlinearitySpec::pure_power(1.0), &Profile::gaussian(), 1.0, &ladder(), g)
            .unwrap();
        assert_eq!(r.verdict, DilationVerdict::NegativeWitness);
        assert!(r.best_lambda < 1.0);
        assert!(r.max_kinetic_law_error() < 1e-3, "{}", r.max_kinetic_law_error());
    }

    #[test]
    fn every_lambda_overflowing_is_an_error() {
        let g = Grid::line(10.0, 64, 0.5).unwrap();
        let e = dilation_test(&NonlinearitySpec::zero(), &Profile::gaussian(), 1.0, &[0.5, 0.25], g);
        assert!(matches!(e, Err(Error::ProfileOverflow { .. })));
    }

    fn cfg() -> FlowConfig {
        FlowConfig {
            el_tol: 1e-7,
            ..FlowConfig::default()
        }
    }

    #[test]
    fn kinetic_only_scan_is_flat_zero_and_subadditive() {
        let g = Grid::line(20.0, 64, 0.5).unwrap();
        let scan = mass_scan(&NonlinearitySpec::zero(), g, &[0.5, 1.0, 1.5], &cfg(), false).unwrap();
        assert!(scan.i_values().iter().all(|i| i.abs() < 1e-10));
        let rep = subadditivity_check(
            &scan,
            &[(1.5, 1.0)],
            SubadditivityMode::Plain,
            SubadditivityOptions::default(),
        )
        .unwrap();
        assert!(rep.all_hold && rep.rows[0].interpolated);
        let err = subadditivity_check(
            &scan,
            &[(1.5, 1.0)],
            SubadditivityMode::Plain,
            SubadditivityOptions {
                interpolate: false,
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::InsufficientScan(_)));
    }

    #[test]
    fn cubic_scan_is_negative_decreasing_and_subadditive() {
        let g = Grid::line(80.0, 512, 0.5).unwrap();
        let b = (4.0f64 - 1.0).sqrt();
        let cs = [0.5, 1.0, 1.5, b, 2.0];
        let scan = mass_scan(&NonlinearitySpec::pure_power(1.0), g, &cs, &cfg(), false).unwrap();
        let is = scan.i_values();
        assert!(is.iter().all(|i| *i < 0.0));
        assert!(is.windows(2).all(|w| w[1] < w[0]));
        let rep = subadditivity_check(
            &scan,
            &[(2.0, 1.0)],
            SubadditivityMode::Plain,
            SubadditivityOptions::default(),
        )
        .unwrap();
        assert!(rep.all_hold && !rep.rows[0].interpolated, "{rep:?}");
        let csv = scan.to_csv().unwrap();
        assert!(csv.starts_with("c,I_c,I_inf_c,converged\n"));
        assert_eq!(csv.lines().count(), 6);
    }

    #[test]
    fn perturbation_strictly_lowers_the_infimum() {
        let g = Grid::line(40.0, 256, 0.5).unwrap();
        let spec = NonlinearitySpec::perturbed_periodic(
            1.0,
            PeriodicCoefficient::Constant { value: 1.0 },
            Envelope::Gaussian {
                amplitude: 1.0,
                width: 1.0,
            },
        );
        let mut config = cfg();
        config.restarts = 3;
        let r = strict_comparison(&spec, g, 1.0, &config).unwrap();
        assert!(r.holds, "{r:?}");
    }

    #[test]
    fn theta_scaling_for_the_cubic() {
        let g = Grid::line(80.0, 512, 0.5).unwrap();
        let r = theta_scaling_check(&NonlinearitySpec::pure_power(1.0), g, 1.0, &[1.0, 2.0], &cfg(), 1e-6)
            .unwrap();
        assert!(r.all_hold, "{r:?}");
        assert_eq!(r.rows[0].margin, 0.0);
    }

    #[test]
    fn theta_scaling_needs_negative_infimum() {
        let g = Grid::line(20.0, 64, 0.5).unwrap();
        let e = theta_scaling_check(&NonlinearitySpec::zero(), g, 1.0, &[2.0], &cfg(), 1e-6);
        assert!(matches!(e, Err(Error::PrerequisiteFailed(_))));
    }
}
