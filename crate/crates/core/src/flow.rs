//! Minimization of `J` on the mass sphere by a normalized gradient flow:
//!
//! ```text
//! u_{k+1} = normalize_mass(u_k - tau_k J'(u_k), c2)
//! ```
//!
//! with `tau_k` shrunk by `backtrack_factor` until `J` strictly decreases
//! and regrown afterwards. Several restarts run in parallel and the best
//! one is kept.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::energy::{energy, evaluate, total_energy, EnergyReport};
use crate::error::{Error, Result};
use crate::field::{dilate, normalize_mass, translate, Field, Grid, Profile};
use crate::nonlinearity::NonlinearitySpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InitStrategy {
    /// Gaussian dilations `phi_lambda` over `lambda = 2^{k/2}`, keeping the
    /// lowest energy.
    #[default]
    GaussianDilationScan,
    /// A Gaussian of random width and center.
    RandomBump,
    #[serde(skip)]
    WarmStart(Box<Field>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlowConfig {
    pub c2: f64,
    pub step_init: f64,
    pub backtrack_factor: f64,
    pub max_iters: usize,
    pub el_tol: f64,
    pub restarts: usize,
    pub seed: u64,
    pub init_strategy: InitStrategy,
    /// `J` below this raises [`Error::DivergentEnergy`].
    pub energy_floor: Option<f64>,
    /// Keep every `n`-th iterate of the winning restart.
    pub snapshot_every: Option<usize>,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            c2: 1.0,
            step_init: 1.0,
            backtrack_factor: 0.5,
            max_iters: 50_000,
            el_tol: 1e-6,
            restarts: 1,
            seed: 0,
            init_strategy: InitStrategy::GaussianDilationScan,
            energy_floor: None,
            snapshot_every: None,
        }
    }
}

impl FlowConfig {
    pub fn with_mass(c2: f64) -> Self {
        FlowConfig {
            c2,
            ..FlowConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let rule = |ok: bool, r: &str| if ok { Ok(()) } else { Err(Error::invariant(r)) };
        rule(self.c2 > 0.0 && self.c2.is_finite(), "c2 > 0")?;
        rule(self.step_init > 0.0, "step_init > 0")?;
        rule(
            self.backtrack_factor > 0.0 && self.backtrack_factor < 1.0,
            "backtrack_factor ∈ (0,1)",
        )?;
        rule(self.max_iters > 0, "max_iters > 0")?;
        rule(self.el_tol > 0.0, "el_tol > 0")?;
        rule(self.restarts >= 1, "restarts >= 1")?;
        rule(self.snapshot_every != Some(0), "snapshot_every > 0")?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimizerResult {
    #[serde(skip)]
    pub u_star: Field,
    pub report: EnergyReport,
    pub iterations: usize,
    pub energy_trace: Vec<f64>,
    pub residual_trace: Vec<f64>,
    pub hs_trace: Vec<f64>,
    pub converged: bool,
    /// Index of the winning restart.
    pub restart: usize,
    /// Final energy of every restart, in restart order.
    pub restart_energies: Vec<f64>,
    #[serde(skip)]
    pub snapshots: Vec<Field>,
}

impl MinimizerResult {
    /// `max - min` of the restart energies, the solver's energy uncertainty.
    pub fn restart_spread(&self) -> f64 {
        let (lo, hi) = self
            .restart_energies
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &e| (a.min(e), b.max(e)));
        hi - lo
    }

    /// The result itself if converged, [`Error::NonConvergence`] otherwise.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence {
                iterations: self.iterations,
                residual: self.report.el_residual,
            })
        }
    }
}

fn scan_ladder() -> impl Iterator<Item = f64> {
    (-16..=8).map(|k| 2f64.powf(0.5 * k as f64))
}

fn initial_guess(
    spec: &NonlinearitySpec,
    grid: Grid,
    config: &FlowConfig,
    restart: usize,
) -> Result<Field> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(restart as u64));
    let dim = grid.dim();
    let base = match &config.init_strategy {
        InitStrategy::WarmStart(u) => {
            if !u.grid().same_shape(&grid) {
                return Err(Error::InvalidField("warm start lives on another grid".into()));
            }
            normalize_mass(u, config.c2)?
        }
        InitStrategy::GaussianDilationScan => {
            let mut best: Option<(f64, Field)> = None;
            for lambda in scan_ladder() {
                let phi = match dilate(&Profile::gaussian(), lambda, grid) {
                    Ok(f) => normalize_mass(&f, config.c2)?,
                    Err(Error::ProfileOverflow { .. }) => continue,
                    Err(e) => return Err(e),
                };
                let j = total_energy(&phi, spec)?;
                if best.as_ref().map_or(true, |(b, _)| j < *b) {
                    best = Some((j, phi));
                }
            }
            best.ok_or_else(|| Error::ProfileOverflow {
                needed: Profile::gaussian().support_radius(),
                available: 0.5 * grid.box_length(),
            })?
            .1
        }
        InitStrategy::RandomBump => {
            let half = 0.5 * grid.box_length();
            let mut center = [0.0; 2];
            for c in center.iter_mut().take(dim) {
                *c = rng.gen_range(-0.125..0.125) * half;
            }
            let support = Profile::gaussian().support_radius();
            // widest bump that still fits around the chosen center
            let min_lambda = support / (half - center[..dim].iter().fold(0.0f64, |m, c| m.max(c.abs())));
            let lambda = min_lambda * 2f64.powf(rng.gen_range(0.0..4.0));
            normalize_mass(&dilate(&Profile::gaussian().centered_at(center), lambda, grid)?, config.c2)?
        }
    };
    if restart == 0 || matches!(config.init_strategy, InitStrategy::RandomBump) {
        return Ok(base);
    }
    let mut shift = [0.0; 2];
    for s in shift.iter_mut().take(dim) {
        *s = rng.gen_range(-1.0..1.0);
    }
    let moved = translate(&base, shift);
    let noisy = Field::from_parts(
        grid,
        moved
            .values()
            .iter()
            .map(|v| v * (1.0 + 0.05 * rng.gen_range(-1.0..1.0)))
            .collect(),
    );
    normalize_mass(&noisy, config.c2)
}

struct Trajectory {
    u: Field,
    iterations: usize,
    energy_trace: Vec<f64>,
    residual_trace: Vec<f64>,
    hs_trace: Vec<f64>,
    converged: bool,
    residual: f64,
    snapshots: Vec<Field>,
}

fn run_flow(u0: Field, spec: &NonlinearitySpec, config: &FlowConfig) -> Result<Trajectory> {
    let mut u = u0;
    let mut state = evaluate(&u, spec)?;
    let mut tau = config.step_init;
    let mut t = Trajectory {
        u: u.clone(),
        iterations: 0,
        energy_trace: vec![state.total],
        residual_trace: vec![state.residual],
        hs_trace: vec![state.hs_norm()],
        converged: false,
        residual: state.residual,
        snapshots: Vec::new(),
    };
    let keep = |k: usize| config.snapshot_every.is_some_and(|n| k % n == 0);
    if keep(0) {
        t.snapshots.push(u.clone());
    }
    // shrinking below this cannot change u in double precision
    let tau_min = config.step_init * 1e-18;
    while t.iterations < config.max_iters {
        if state.residual <= config.el_tol {
            t.converged = true;
            break;
        }
        let mut accepted = None;
        while tau >= tau_min {
            let trial = u.add_scaled(-tau, &state.gradient);
            let trial = match normalize_mass(&trial, config.c2) {
                Ok(v) if v.is_finite() => v,
                _ => {
                    tau *= config.backtrack_factor;
                    continue;
                }
            };
            let j = total_energy(&trial, spec)?;
            if j < state.total {
                accepted = Some(trial);
                break;
            }
            tau *= config.backtrack_factor;
        }
        let Some(next) = accepted else { break };
        u = next;
        state = evaluate(&u, spec)?;
        if !state.total.is_finite() || config.energy_floor.is_some_and(|f| state.total < f) {
            return Err(Error::DivergentEnergy {
                energy: state.total,
                floor: config.energy_floor.unwrap_or(f64::NEG_INFINITY),
            });
        }
        t.iterations += 1;
        t.energy_trace.push(state.total);
        t.residual_trace.push(state.residual);
        t.hs_trace.push(state.hs_norm());
        if keep(t.iterations) {
            t.snapshots.push(u.clone());
        }
        tau = (tau / config.backtrack_factor).min(config.step_init);
    }
    if state.residual <= config.el_tol {
        t.converged = true;
    }
    t.residual = state.residual;
    t.u = u;
    Ok(t)
}

/// Minimizes `J` over `{ mass = c2 }` from `config.restarts` starting points.
///
/// A run that stops above `el_tol` (iteration cap or stalled line search) is
/// still returned, with `converged = false`.
pub fn minimize(spec: &NonlinearitySpec, grid: Grid, config: &FlowConfig) -> Result<MinimizerResult> {
    config.validate()?;
    spec.bind(&grid)?;
    let runs: Vec<Trajectory> = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_flow(initial_guess(spec, grid, config, r)?, spec, config))
        .collect::<Result<_>>()?;
    let restart_energies: Vec<f64> = runs.iter().map(|t| *t.energy_trace.last().unwrap()).collect();
    let mut best = 0;
    for (r, t) in runs.iter().enumerate().skip(1) {
        let (e, eb) = (restart_energies[r], restart_energies[best]);
        if e < eb - 1e-12 || ((e - eb).abs() <= 1e-12 && t.residual < runs[best].residual) {
            best = r;
        }
    }
    let t = runs.into_iter().nth(best).unwrap();
    let report = energy(&t.u, spec)?;
    Ok(MinimizerResult {
        u_star: t.u,
        report,
        iterations: t.iterations,
        energy_trace: t.energy_trace,
        residual_trace: t.residual_trace,
        hs_trace: t.hs_trace,
        converged: t.converged,
        restart: best,
        restart_energies,
        snapshots: t.snapshots,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub converged: bool,
    pub monotone_energy: bool,
    pub el_residual: f64,
    pub lambda: f64,
    pub initial_hs_norm: f64,
    /// `sup_k |u_k|_{H^s}` along the trajectory.
    pub sup_hs_norm: f64,
    /// `|mass(u_star) - c2| / c2`
    pub mass_error: f64,
}

pub fn certify(result: &MinimizerResult, spec: &NonlinearitySpec, c2: f64) -> Result<Certification> {
    let report = energy(&result.u_star, spec)?;
    Ok(Certification {
        converged: result.converged,
        monotone_energy: result.energy_trace.windows(2).all(|w| w[1] <= w[0]),
        el_residual: report.el_residual,
        lambda: report.lambda,
        initial_hs_norm: result.hs_trace.first().copied().unwrap_or(0.0),
        sup_hs_norm: result.hs_trace.iter().fold(0.0f64, |m, v| m.max(*v)),
        mass_error: (report.mass - c2).abs() / c2,
    })
}
