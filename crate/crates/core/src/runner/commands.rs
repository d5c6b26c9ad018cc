//! The experiment behind each subcommand. Each one computes, hands every
//! artifact to the [`RunWriter`] and returns a short human summary.

use serde::Serialize;

use super::config::{RunConfig, SequenceSource};
use super::manifest::RunWriter;
use crate::analysis::{
    dilation_test, mass_scan, subadditivity_check, theta_scaling_check, SubadditivityMode,
    SubadditivityOptions,
};
use crate::ccdiag::{classify, synthetic, FieldSequence};
use crate::error::{Error, Result};
use crate::field::{frac_kinetic, gagliardo_kinetic_1d, io, Field, Grid, Profile};
use crate::flow::{certify, minimize, FlowConfig};
use crate::nonlinearity::{check_cutoff_bounds, check_hypotheses, SamplePlan, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    CheckHypotheses,
    Minimize,
    ScanMass,
    DilationTest,
    SubaddTest,
    ThetaTest,
    CcClassify,
    ValidateKinetic,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckHypotheses => "check-hypotheses",
            Command::Minimize => "minimize",
            Command::ScanMass => "scan-mass",
            Command::DilationTest => "dilation-test",
            Command::SubaddTest => "subadd-test",
            Command::ThetaTest => "theta-test",
            Command::CcClassify => "cc-classify",
            Command::ValidateKinetic => "validate-kinetic",
        }
    }

    pub fn run(self, cfg: &RunConfig, out: &mut RunWriter) -> Result<String> {
        match self {
            Command::CheckHypotheses => run_check_hypotheses(cfg, out),
            Command::Minimize => run_minimize(cfg, out),
            Command::ScanMass => run_scan_mass(cfg, out),
            Command::DilationTest => run_dilation(cfg, out),
            Command::SubaddTest => run_subadd(cfg, out),
            Command::ThetaTest => run_theta(cfg, out),
            Command::CcClassify => run_cc_classify(cfg, out),
            Command::ValidateKinetic => run_validate_kinetic(cfg, out),
        }
    }
}

fn csv_string<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn run_check_hypotheses(cfg: &RunConfig, out: &mut RunWriter) -> Result<String> {
    let spec = cfg.require_spec()?;
    let mut plan = SamplePlan::for_grid(&cfg.grid);
    if let Some(hs) = &cfg.experiment.hypotheses {
        plan = plan.requesting(hs);
    }
    let report = check_hypotheses(spec, &plan)?;
    let cutoff = check_cutoff_bounds(spec, &plan)?;
    #[derive(Serialize)]
    struct Out<'a, R, C> {
        report: &'a R,
        cutoff_violations: &'a C,
    }
    out.json("hypotheses.json", &Out { report: &report, cutoff_violations: &cutoff })?;
    let mut lines: Vec<String> = report
        .outcomes
        .iter()
        .map(|o| {
            let v = match o.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "fail",
                Verdict::NotApplicable => "not applicable",
            };
            format!("{}: {v}", o.hypothesis)
        })
        .collect();
    lines.push(format!("cutoff bound violations: {}", cutoff.len()));
    Ok(lines.join("\n"))
}

#[derive(Serialize)]
struct TraceRow {
    iteration: usize,
    #[serde(rename = "J")]
    energy: f64,
    residual: f64,
    hs: f64,
}

fn run_minimize(cfg: &RunConfig, out: &mut RunWriter) -> Result<String> {
    let spec = cfg.require_spec()?;
    let result = minimize(spec, cfg.grid, &cfg.flow)?;
    let cert = certify(&result, spec, cfg.flow.c2)?;
    #[derive(Serialize)]
    struct Out<'a, R, C> {
        result: &'a R,
        certification: &'a C,
    }
    out.json("result.json", &Out { result: &result, certification: &cert })?;
    out.field("u_star.bin", &result.u_star)?;
    let rows: Vec<TraceRow> = (0..result.energy_trace.len())
        .map(|k| TraceRow {
            iteration: k,
            energy: result.energy_trace[k],
            residual: result.residual_trace[k],
            hs: result.hs_trace[k],
        })
        .collect();
    out.text("trace.csv", &csv_string(&rows)?)?;
    let r = &result.report;
    let summary = format!(
        "J = {:.10}  lambda = {:.10}  residual = {:.3e}  iterations = {}  converged = {}",
        r.total, r.lambda, r.el_residual, result.iterations, result.converged
    );
    result.require_converged().map(|_| summary)
}

fn run_scan_mass(cfg: &RunConfig, out: &mut RunWriter) -> Result<String> {
    let spec = cfg.require_spec()?;
    let e = &cfg.experiment;
    let scan = mass_scan(spec, cfg.grid, &e.c_values, &cfg.flow, e.with_infinity)?;
    out.text("scan.csv", &scan.to_csv()?)?;
    out.json("scan.json", &scan)?;
    let flagged = scan.points.iter().filter(|p| !p.converged).count();
    Ok(format!(
        "{} points, max adjacent jump {:.3e}, {} not converged",
        scan.points.len(),
        scan.max_adjacent_jump,
        flagged
    ))
}

fn run_dilation(cfg: &RunConfig, out: &mut RunWriter) -> Result<String> {
    let spec = cfg.require_spec()?;
    let e = &cfg.experiment;
    let report = dilation_test(spec, &e.profile, cfg.flow.c2, &e.lambda_ladder, cfg.grid)?;
    out.json("dilation.json", &report)?;
    out.text("dilation.csv", &csv_string(&report.rows)?)?;
    Ok(format!(
        "{}  best lambda = {}  J = {:.6e}  kinetic law error = {:.2e}",
        serde_json::to_value(report.verdict)?.as_str().unwrap_or_default(),
        report.best_lambda,
        report.best_energy,
        report.max_kinetic_law_error()
    ))
}

fn run_subadd(cfg: &RunConfig, out: &mut RunWriter) -> Result<String> {
    let spec = cfg.require_spec()?;
    let e = &cfg.experiment;
    let split = |c: f64, a: f64| if e.linear_split { c - a } else { (c * c - a * a).sqrt() };
    let mut cs: Vec<f64> = e
        .pairs
        .iter()
        .flat_map(|&(c, a)| [c, a, split(c, a)])
        .filter(|c| *c > 0.0)
        .collect();
    cs.sort_by(f64::total_cmp);
    cs.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    let cross = e.subadd_mode == SubadditivityMode::Cross;
    let scan = mass_scan(spec, cfg.grid, &cs, &cfg.flow, cross)?;
    let options = SubadditivityOptions {
        tol: e.tol,
        interpolate: e.interpolate,
        linear_split: e.linear_split,
    };
    let report = subadditivity_check(&scan, &e.pairs, e.subadd_mode, options)?;
    out.text("scan.csv", &scan.to_csv()?)?;
    out.json("subadditivity.json", &report)?;
    Ok(format!(
        "{:?}: {} rows, worst margin {:.3e}, all hold = {}",
        report.mode,
        report.rows.len(),
        report.worst_margin,
        report.all_hold
    ))
}

fn run_theta(cfg: &RunConfig, out: &mut RunWriter) -> Result<String> {
    let spec = cfg.require_spec()?;
    let e = &cfg.experiment;
    let target = if e.theta_on_infinity {
        spec.infinity_part().ok_or(Error::MissingComparison("theta-test"))?
    } else {
        spec.clone()
    };
    let report = theta_scaling_check(&target, cfg.grid, cfg.flow.c2.sqrt(), &e.thetas, &cfg.flow, e.tol)?;
    out.json("theta.json", &report)?;
    Ok(format!("I_c = {:.10}, all hold = {}", report.i_c, report.all_hold))
}

fn sequence(cfg: &RunConfig) -> Result<Vec<Field>> {
    let (grid, profile, c2) = (cfg.grid, &cfg.experiment.profile, cfg.flow.c2);
    match &cfg.experiment.sequence {
        SequenceSource::Flow { every } => {
            let spec = cfg.require_spec()?;
            let flow = FlowConfig {
                snapshot_every: Some(*every),
                ..cfg.flow.clone()
            };
            Ok(minimize(spec, grid, &flow)?.snapshots)
        }
        SequenceSource::Spreading { len, lambda_start } => {
            synthetic::spreading(grid, profile, *lambda_start, *len, c2)
        }
        SequenceSource::Translates { len, step } => {
            synthetic::moving_translates(grid, profile, *step, *len, c2)
        }
        SequenceSource::Separating { len, inner, d0, dd } => {
            synthetic::separating_bumps(grid, profile, *inner, *d0, *dd, *len, c2)
        }
        SequenceSource::Files { paths } => paths
            .iter()
            .map(|p| io::read_binary(&cfg.base_dir.join(p)))
            .collect(),
    }
}

fn run_cc_classify(cfg: &RunConfig, out: &mut RunWriter) -> Result<String> {
    let seq = FieldSequence::new(sequence(cfg)?)?;
    let c = classify(&seq, &cfg.experiment.eps_ladder)?;
    out.json("classification.json", &c)?;
    out.text("samples.csv", &c.samples_csv()?)?;
    Ok(format!("{:?} over {} fields: {}", c.verdict, seq.len(), c.rationale))
}

#[derive(Debug, Clone, Serialize)]
struct KineticRow {
    s: f64,
    profile: String,
    points: usize,
    spectral: f64,
    gagliardo: f64,
    rel_error: f64,
}

fn run_validate_kinetic(cfg: &RunConfig, out: &mut RunWriter) -> Result<String> {
    if cfg.grid.dim() != 1 {
        return Err(Error::DimensionUnsupported(cfg.grid.dim()));
    }
    let e = &cfg.experiment;
    let (l, m) = (cfg.grid.box_length(), cfg.grid.points_per_dim());
    let mut rows = Vec::new();
    for &s in &e.kinetic_s_values {
        for &kind in &e.kinetic_profiles {
            for points in [m, 2 * m] {
                let u = Profile::new(kind).sample(Grid::line(l, points, s)?)?;
                let spectral = frac_kinetic(&u);
                let gagliardo = gagliardo_kinetic_1d(&u)?;
                rows.push(KineticRow {
                    s,
                    profile: serde_json::to_value(kind)?.as_str().unwrap_or_default().to_string(),
                    points,
                    spectral,
                    gagliardo,
                    rel_error: (spectral - gagliardo).abs() / spectral,
                });
            }
        }
    }
    out.text("kinetic.csv", &csv_string(&rows)?)?;
    out.json("kinetic.json", &rows)?;
    let worst = rows
        .iter()
        .filter(|r| r.points == m)
        .fold(0.0f64, |w, r| w.max(r.rel_error));
    Ok(format!("{} rows, worst relative gap at M = {m}: {worst:.3e}", rows.len()))
}
