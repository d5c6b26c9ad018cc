//! Lattice verifiers for the structural hypotheses (F0)-(F6).
//!
//! Every check walks a finite `(x, t, theta)` lattice. A `pass` means no
//! violation was found on that lattice and nothing more. A `fail` always
//! carries the lattice point that violates the inequality, so evaluating
//! `F` there reproduces it.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::NonlinearitySpec;
use crate::error::{Error, Result};
use crate::field::{Grid, Point};

/// Relative slack for inequalities that hold with equality for power laws.
const ROUNDOFF: f64 = 1e-12;
/// Largest admissible log-log slope of a fitted ratio at the lattice ends.
const GROWTH_SLOPE: f64 = 0.05;
/// Level below which the (F3) sup must have decayed at the outermost radius.
const DECAY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    F0,
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
}

impl Hypothesis {
    pub const ALL: [Hypothesis; 7] = [
        Hypothesis::F0,
        Hypothesis::F1,
        Hypothesis::F2,
        Hypothesis::F3,
        Hypothesis::F4,
        Hypothesis::F5,
        Hypothesis::F6,
    ];

    fn needs_comparison(self) -> bool {
        matches!(
            self,
            Hypothesis::F3 | Hypothesis::F4 | Hypothesis::F5 | Hypothesis::F6
        )
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

/// A lattice point `(x, t, theta)` with the two sides of the inequality
/// evaluated there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Point,
    pub t: f64,
    pub theta: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScannedRanges {
    pub radius: [f64; 2],
    pub t: [f64; 2],
    pub theta: [f64; 2],
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisOutcome {
    pub hypothesis: Hypothesis,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Smallest lattice-valid constant (A for F0, B for F4) when fitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_derivative_constant: Option<f64>,
    /// Points where `F > F^inf` strictly (F6 only).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub strict_set: Vec<Point>,
    pub detail: String,
    pub scanned: ScannedRanges,
}

/// A parameter rule that involves no lattice, such as `0 < ell < 4s/N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterCheck {
    pub rule: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub family: String,
    pub dim: usize,
    pub s: f64,
    pub parameters: Vec<ParameterCheck>,
    pub outcomes: Vec<HypothesisOutcome>,
}

impl HypothesisReport {
    pub fn outcome(&self, h: Hypothesis) -> Option<&HypothesisOutcome> {
        self.outcomes.iter().find(|o| o.hypothesis == h)
    }

    pub fn verdict(&self, h: Hypothesis) -> Option<Verdict> {
        self.outcome(h).map(|o| o.verdict)
    }
}

/// The sample lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub dim: usize,
    pub s: f64,
    /// Increasing `|x|` values.
    pub radii: Vec<f64>,
    /// Unit directions; only the first `dim` components are used.
    pub directions: Vec<Point>,
    /// Increasing positive `t` values.
    pub t_values: Vec<f64>,
    /// Increasing `theta >= 1` values.
    pub thetas: Vec<f64>,
    /// Hypotheses to check; `None` checks all that apply.
    #[serde(default)]
    pub requested: Option<Vec<Hypothesis>>,
    /// Overrides the comparison `F^inf` the spec carries.
    #[serde(default)]
    pub comparison: Option<NonlinearitySpec>,
}

fn log_spaced(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    let n = ((b - a) * per_decade as f64).round() as usize;
    (0..=n)
        .map(|k| 10f64.powf(a + (b - a) * k as f64 / n as f64))
        .collect()
}

impl SamplePlan {
    /// Radii `0` and log-spaced `1e-2 .. L/2`, `t` log-spaced in
    /// `[1e-6, 1e3]` at ten points per decade, `theta` in `[1, 100]`.
    pub fn for_grid(grid: &Grid) -> Self {
        let mut radii = vec![0.0];
        radii.extend(log_spaced(1e-2, 0.5 * grid.box_length(), 8));
        let directions = if grid.dim() == 1 {
            vec![[1.0, 0.0], [-1.0, 0.0]]
        } else {
            (0..8)
                .map(|k| {
                    let a = k as f64 * std::f64::consts::FRAC_PI_4;
                    [a.cos(), a.sin()]
                })
                .collect()
        };
        SamplePlan {
            dim: grid.dim(),
            s: grid.s(),
            radii,
            directions,
            t_values: log_spaced(1e-6, 1e3, 10),
            thetas: vec![1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 5.0, 10.0, 20.0, 50.0, 100.0],
            requested: None,
            comparison: None,
        }
    }

    pub fn requesting(mut self, hs: &[Hypothesis]) -> Self {
        self.requested = Some(hs.to_vec());
        self
    }

    pub fn with_comparison(mut self, finf: NonlinearitySpec) -> Self {
        self.comparison = Some(finf);
        self
    }

    fn points(&self) -> Vec<(f64, Point)> {
        let mut out = Vec::new();
        for &r in &self.radii {
            for d in &self.directions {
                out.push((r, [r * d[0], if self.dim == 2 { r * d[1] } else { 0.0 }]));
                if r == 0.0 {
                    break;
                }
            }
        }
        out
    }

    fn ranges(&self, thetas: bool) -> ScannedRanges {
        let ends = |v: &[f64]| [v[0], v[v.len() - 1]];
        let points = self.points().len() * self.t_values.len();
        ScannedRanges {
            radius: ends(&self.radii),
            t: ends(&self.t_values),
            theta: if thetas { ends(&self.thetas) } else { [1.0, 1.0] },
            points: if thetas { points * self.thetas.len() } else { points },
        }
    }
}

/// `Some(value)` in the table, `None` outside it.
fn probe(v: Result<f64>) -> Result<Option<f64>> {
    match v {
        Ok(v) => Ok(Some(v)),
        Err(Error::TabulationRange { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

struct Checker<'a> {
    spec: &'a NonlinearitySpec,
    plan: &'a SamplePlan,
    points: Vec<(f64, Point)>,
}

fn witness(x: Point, t: f64, theta: f64, lhs: f64, rhs: f64) -> Witness {
    Witness {
        x,
        t,
        theta,
        lhs,
        rhs,
    }
}

impl<'a> Checker<'a> {
    fn f(&self, spec: &NonlinearitySpec, x: &Point, t: f64) -> Result<Option<f64>> {
        probe(spec.eval_f(x, self.plan.dim, t))
    }

    fn df(&self, spec: &NonlinearitySpec, x: &Point, t: f64) -> Result<Option<f64>> {
        probe(spec.eval_df(x, self.plan.dim, t))
    }

    fn outcome(&self, h: Hypothesis, thetas: bool) -> HypothesisOutcome {
        HypothesisOutcome {
            hypothesis: h,
            verdict: Verdict::Pass,
            witness: None,
            fitted_constant: None,
            fitted_derivative_constant: None,
            strict_set: Vec::new(),
            detail: String::new(),
            scanned: self.plan.ranges(thetas),
        }
    }

    fn fail(mut out: HypothesisOutcome, w: Witness, detail: String) -> HypothesisOutcome {
        out.verdict = Verdict::Fail;
        out.witness = Some(w);
        out.detail = detail;
        out
    }

    /// Shared by (F0) and (F4): sign conditions, fitted constants for
    /// `F <= C (t^{a+2} + t^{b+2})`, `dF <= C' (t^{a+1} + t^{b+1})`, and
    /// a growth check that the fitted ratios stay bounded at both lattice
    /// ends.
    fn growth_bound(
        &self,
        h: Hypothesis,
        spec: &NonlinearitySpec,
        lo: f64,
        hi: f64,
        given: (Option<f64>, Option<f64>),
    ) -> Result<HypothesisOutcome> {
        let mut out = self.outcome(h, false);
        let env = |t: f64| t.powf(lo + 2.0) + t.powf(hi + 2.0);
        let denv = |t: f64| t.powf(lo + 1.0) + t.powf(hi + 1.0);
        let (mut c, mut cp) = (0.0f64, 0.0f64);
        for (_, x) in &self.points {
            // per-point ratio sequences for the growth test
            let mut ratios: Vec<(f64, f64, f64)> = Vec::new();
            for &t in &self.plan.t_values {
                let (Some(f), Some(df)) = (self.f(spec, x, t)?, self.df(spec, x, t)?) else {
                    continue;
                };
                if f < 0.0 {
                    return Ok(Self::fail(out, witness(*x, t, 1.0, f, 0.0), "F < 0".into()));
                }
                if df < 0.0 {
                    return Ok(Self::fail(
                        out,
                        witness(*x, t, 1.0, df, 0.0),
                        "dF/dt < 0 at t > 0".into(),
                    ));
                }
                if let Some(a) = given.0 {
                    if f > a * env(t) * (1.0 + ROUNDOFF) {
                        return Ok(Self::fail(
                            out,
                            witness(*x, t, 1.0, f, a * env(t)),
                            format!("F exceeds the given bound with constant {a}"),
                        ));
                    }
                }
                if let Some(a) = given.1 {
                    if df > a * denv(t) * (1.0 + ROUNDOFF) {
                        return Ok(Self::fail(
                            out,
                            witness(*x, t, 1.0, df, a * denv(t)),
                            format!("dF/dt exceeds the given bound with constant {a}"),
                        ));
                    }
                }
                let (r, rp) = (f / env(t), df / denv(t));
                c = c.max(r);
                cp = cp.max(rp);
                ratios.push((t, r, rp));
            }
            if ratios.len() < 2 {
                continue;
            }
            let slope = |a: (f64, f64), b: (f64, f64)| {
                if a.1 <= 0.0 || b.1 <= 0.0 {
                    0.0
                } else {
                    (b.1 / a.1).ln() / (b.0 / a.0).ln()
                }
            };
            let n = ratios.len();
            let (first, second) = (ratios[0], ratios[1]);
            let (prev, last) = (ratios[n - 2], ratios[n - 1]);
            for (pick, label) in [(1usize, "F"), (2, "dF/dt")] {
                let get = |q: (f64, f64, f64)| (q.0, if pick == 1 { q.1 } else { q.2 });
                let top = slope(get(prev), get(last));
                if top > GROWTH_SLOPE {
                    return Ok(Self::fail(
                        out,
                        witness(*x, last.0, 1.0, top, GROWTH_SLOPE),
                        format!("{label} grows faster than the bound as t -> inf (log slope {top:.3})"),
                    ));
                }
                let bottom = slope(get(first), get(second));
                if bottom < -GROWTH_SLOPE {
                    return Ok(Self::fail(
                        out,
                        witness(*x, first.0, 1.0, bottom, -GROWTH_SLOPE),
                        format!("{label} decays slower than the bound as t -> 0 (log slope {bottom:.3})"),
                    ));
                }
            }
        }
        out.fitted_constant = Some(given.0.unwrap_or(c));
        out.fitted_derivative_constant = Some(given.1.unwrap_or(cp));
        out.detail = format!(
            "F <= {c:.6e} (t^{} + t^{}), dF <= {cp:.6e} (t^{} + t^{}) on the lattice",
            lo + 2.0,
            hi + 2.0,
            lo + 1.0,
            hi + 1.0
        );
        Ok(out)
    }

    fn f0(&self) -> Result<HypothesisOutcome> {
        let s = self.spec;
        self.growth_bound(Hypothesis::F0, s, 0.0, s.ell, (s.a, s.a_prime))
    }

    fn f1(&self) -> Result<HypothesisOutcome> {
        let s = self.spec;
        let mut out = self.outcome(Hypothesis::F1, false);
        for (r, x) in self.points.iter().filter(|(r, _)| *r >= s.r_f1) {
            for &t in self.plan.t_values.iter().filter(|&&t| t < s.s_f1) {
                let Some(f) = self.f(s, x, t)? else { continue };
                let lower = s.delta_f1 * r.powf(-s.p_f1) * t.powf(s.alpha);
                if f < lower - ROUNDOFF * lower.max(f64::MIN_POSITIVE) {
                    return Ok(Self::fail(
                        out,
                        witness(*x, t, 1.0, f, lower),
                        "F < delta |x|^-p |t|^alpha".into(),
                    ));
                }
            }
        }
        out.detail = format!(
            "F >= {} |x|^-{} |t|^{} for |x| >= {}, t < {}",
            s.delta_f1, s.p_f1, s.alpha, s.r_f1, s.s_f1
        );
        Ok(out)
    }

    /// `F(x, theta t) >= theta^q F(x, t)` over the lattice.
    fn scaling(
        &self,
        h: Hypothesis,
        spec: &NonlinearitySpec,
        power: f64,
    ) -> Result<HypothesisOutcome> {
        let mut out = self.outcome(h, true);
        // t nearest to 1 first, so witnesses read naturally
        let mut ts = self.plan.t_values.clone();
        ts.sort_by(|a, b| a.ln().abs().total_cmp(&b.ln().abs()));
        for (_, x) in &self.points {
            for &t in &ts {
                let Some(base) = self.f(spec, x, t)? else { continue };
                for &theta in &self.plan.thetas {
                    let Some(scaled) = self.f(spec, x, theta * t)? else { continue };
                    let rhs = theta.powf(power) * base;
                    if scaled < rhs - ROUNDOFF * rhs.abs() {
                        return Ok(Self::fail(
                            out,
                            witness(*x, t, theta, scaled, rhs),
                            format!("F(x, theta t) < theta^{power} F(x, t)"),
                        ));
                    }
                }
            }
        }
        out.detail = format!("F(x, theta t) >= theta^{power} F(x, t) on the lattice");
        Ok(out)
    }

    fn f3(&self, finf: &NonlinearitySpec) -> Result<HypothesisOutcome> {
        let beta = self.spec.beta;
        let mut out = self.outcome(Hypothesis::F3, false);
        // sup over t and directions at each radius
        let mut sups: Vec<(f64, f64, Point, f64)> = Vec::new();
        for (r, x) in &self.points {
            for &t in &self.plan.t_values {
                let (Some(f), Some(g)) = (self.f(self.spec, x, t)?, self.f(finf, x, t)?) else {
                    continue;
                };
                let q = (f - g).abs() / (t * t + t.powf(beta + 2.0));
                match sups.last_mut() {
                    Some(last) if last.0 == *r => {
                        if q > last.1 {
                            *last = (*r, q, *x, t);
                        }
                    }
                    _ => sups.push((*r, q, *x, t)),
                }
            }
        }
        let Some(&(_, last_q, last_x, last_t)) = sups.last() else {
            out.verdict = Verdict::NotApplicable;
            out.detail = "no lattice point inside the tabulation".into();
            return Ok(out);
        };
        let half = sups.len() / 2;
        for w in sups[half..].windows(2) {
            if w[1].1 > w[0].1 * (1.0 + 1e-9) + f64::MIN_POSITIVE {
                return Ok(Self::fail(
                    out,
                    witness(w[1].2, w[1].3, 1.0, w[1].1, w[0].1),
                    format!(
                        "sup_t |F - F^inf| / (t^2 + t^(beta+2)) increases from |x| = {} to {}",
                        w[0].0, w[1].0
                    ),
                ));
            }
        }
        if last_q > DECAY_TOL {
            return Ok(Self::fail(
                out,
                witness(last_x, last_t, 1.0, last_q, DECAY_TOL),
                "sup has not decayed below tolerance at the outermost radius".into(),
            ));
        }
        out.detail = format!("sup decays monotonically to {last_q:.3e} at the outermost radius");
        Ok(out)
    }

    fn f4(&self, finf: &NonlinearitySpec) -> Result<HypothesisOutcome> {
        let s = self.spec;
        let mut out = self.growth_bound(Hypothesis::F4, finf, s.gamma, s.ell, (s.b, s.b_prime))?;
        if out.verdict == Verdict::Fail {
            return Ok(out);
        }
        // F^inf must be 1-periodic along every axis
        for (_, x) in &self.points {
            for axis in 0..self.plan.dim {
                let mut y = *x;
                y[axis] += 1.0;
                for &t in &self.plan.t_values {
                    let (Some(a), Some(b)) = (self.f(finf, x, t)?, self.f(finf, &y, t)?) else {
                        continue;
                    };
                    if (a - b).abs() > 1e-10 * a.abs().max(b.abs()).max(1e-300) {
                        return Ok(Self::fail(
                            out,
                            witness(y, t, 1.0, b, a),
                            format!("F^inf is not 1-periodic along axis {axis}"),
                        ));
                    }
                }
            }
        }
        out.detail.push_str("; F^inf is 1-periodic");
        Ok(out)
    }

    fn f6(&self, finf: &NonlinearitySpec) -> Result<HypothesisOutcome> {
        let mut out = self.outcome(Hypothesis::F6, false);
        let mut first: Option<Witness> = None;
        for (_, x) in &self.points {
            let mut strict_here = false;
            for &t in &self.plan.t_values {
                let (Some(f), Some(g)) = (self.f(self.spec, x, t)?, self.f(finf, x, t)?) else {
                    continue;
                };
                if g > f + ROUNDOFF * f.abs() {
                    return Ok(Self::fail(
                        out,
                        witness(*x, t, 1.0, g, f),
                        "F^inf > F".into(),
                    ));
                }
                if f - g > ROUNDOFF * f.abs() {
                    strict_here = true;
                }
                first.get_or_insert(witness(*x, t, 1.0, f, g));
            }
            if strict_here {
                out.strict_set.push(*x);
            }
        }
        if out.strict_set.is_empty() {
            let w = first.unwrap_or(witness([0.0; 2], 1.0, 1.0, 0.0, 0.0));
            return Ok(Self::fail(out, w, "F = F^inf everywhere on the lattice".into()));
        }
        out.detail = format!(
            "F^inf <= F everywhere, strict at {} lattice points",
            out.strict_set.len()
        );
        Ok(out)
    }
}

fn parameter_checks(spec: &NonlinearitySpec, dim: usize, s: f64, finf: bool) -> Vec<ParameterCheck> {
    let crit = 4.0 * s / dim as f64;
    let n = dim as f64;
    let check = |rule: &str, holds: bool, detail: String| ParameterCheck {
        rule: rule.into(),
        holds,
        detail,
    };
    let mut out = vec![
        check(
            "ell < 4s/N",
            spec.ell > 0.0 && spec.ell < crit,
            format!("ell = {}, 4s/N = {crit}", spec.ell),
        ),
        check(
            "p ∈ [0,2)",
            (0.0..2.0).contains(&spec.p_f1),
            format!("p = {}", spec.p_f1),
        ),
        check(
            "N + 2s > (N/2) alpha + p",
            n + 2.0 * s > 0.5 * n * spec.alpha + spec.p_f1,
            format!("{} vs {}", n + 2.0 * s, 0.5 * n * spec.alpha + spec.p_f1),
        ),
    ];
    if finf {
        out.push(check(
            "beta < 4s/N",
            spec.beta < crit,
            format!("beta = {}", spec.beta),
        ));
        out.push(check(
            "gamma < ell",
            spec.gamma < spec.ell,
            format!("gamma = {}, ell = {}", spec.gamma, spec.ell),
        ));
        out.push(check(
            "0 < sigma < 4s/N",
            spec.sigma > 0.0 && spec.sigma < crit,
            format!("sigma = {}", spec.sigma),
        ));
    }
    out
}

/// Runs the requested checks. (F3)-(F6) concern the comparison `F^inf`
/// and are `not_applicable` when none exists, unless requested explicitly,
/// which is an error.
pub fn check_hypotheses(spec: &NonlinearitySpec, plan: &SamplePlan) -> Result<HypothesisReport> {
    let finf = plan.comparison.clone().or_else(|| spec.infinity_part());
    let requested = plan.requested.clone();
    if let (None, Some(req)) = (&finf, &requested) {
        if let Some(h) = req.iter().find(|h| matches!(h, Hypothesis::F3 | Hypothesis::F6)) {
            return Err(Error::MissingComparison(if *h == Hypothesis::F3 { "F3" } else { "F6" }));
        }
    }
    let checker = Checker {
        spec,
        plan,
        points: plan.points(),
    };
    let mut outcomes = Vec::new();
    for h in Hypothesis::ALL {
        if let Some(req) = &requested {
            if !req.contains(&h) {
                continue;
            }
        }
        let outcome = match (h, &finf) {
            (h, None) if h.needs_comparison() => {
                let mut o = checker.outcome(h, false);
                o.verdict = Verdict::NotApplicable;
                o.detail = "no periodic comparison F^inf".into();
                o
            }
            (Hypothesis::F0, _) => checker.f0()?,
            (Hypothesis::F1, _) => checker.f1()?,
            (Hypothesis::F2, _) => checker.scaling(Hypothesis::F2, spec, 2.0)?,
            (Hypothesis::F3, Some(g)) => checker.f3(g)?,
            (Hypothesis::F4, Some(g)) => checker.f4(g)?,
            (Hypothesis::F5, Some(g)) => checker.scaling(Hypothesis::F5, g, spec.sigma + 2.0)?,
            (Hypothesis::F6, Some(g)) => checker.f6(g)?,
            _ => unreachable!(),
        };
        outcomes.push(outcome);
    }
    Ok(HypothesisReport {
        family: spec.family_name().into(),
        dim: plan.dim,
        s: plan.s,
        parameters: parameter_checks(spec, plan.dim, plan.s, finf.is_some()),
        outcomes,
    })
}

/// A lattice point where a cutoff piece exceeds its bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutoffViolation {
    /// `"d1"` or `"d2"`.
    pub piece: &'static str,
    pub x: Point,
    pub t: f64,
    pub value: f64,
    pub bound: f64,
}

/// Checks `|d1| <= A (1 + 2^{ell+1}) |t|` and `|d2| <= 2A |t|^{1 + 4s/N}`
/// on the lattice, with `A` the derivative constant of (F0) (given or
/// fitted). Returns the violations found, empty on success.
pub fn check_cutoff_bounds(spec: &NonlinearitySpec, plan: &SamplePlan) -> Result<Vec<CutoffViolation>> {
    let report = check_hypotheses(spec, &plan.clone().requesting(&[Hypothesis::F0]))?;
    let a = report
        .outcome(Hypothesis::F0)
        .and_then(|o| o.fitted_derivative_constant)
        .or(spec.a_prime)
        .unwrap_or(0.0);
    let exp = 1.0 + 4.0 * plan.s / plan.dim as f64;
    let mut out = Vec::new();
    for (_, x) in plan.points() {
        for &t in &plan.t_values {
            for t in [t, -t] {
                let Some(df) = probe(spec.eval_df(&x, plan.dim, t))? else { continue };
                let d1 = super::cutoff(t) * df;
                let d2 = df - d1;
                let b1 = a * (1.0 + 2f64.powf(spec.ell + 1.0)) * t.abs();
                let b2 = 2.0 * a * t.abs().powf(exp);
                if d1.abs() > b1 * (1.0 + ROUNDOFF) {
                    out.push(CutoffViolation { piece: "d1", x, t, value: d1.abs(), bound: b1 });
                }
                if d2.abs() > b2 * (1.0 + ROUNDOFF) {
                    out.push(CutoffViolation { piece: "d2", x, t, value: d2.abs(), bound: b2 });
                }
            }
        }
    }
    Ok(out)
}
