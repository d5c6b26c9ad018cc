//! Cross-module runs: flow iterates fed to the classifier, and the spec's
//! worked examples that need a full minimization.

use std::f64::consts::PI;

use fracgs::ccdiag::{classify, CCVerdict, FieldSequence};
use fracgs::flow::{certify, InitStrategy};
use fracgs::{minimize, Field, FlowConfig, Grid, NonlinearitySpec};

#[test]
fn minimizing_sequence_is_compact() {
    let grid = Grid::line(80.0, 1024, 0.5).unwrap();
    let config = FlowConfig {
        snapshot_every: Some(20),
        init_strategy: InitStrategy::RandomBump,
        seed: 3,
        ..FlowConfig::with_mass(2.0 * PI)
    };
    let run = minimize(&NonlinearitySpec::pure_power(1.0), grid, &config).unwrap();
    assert!(run.converged);
    let seq = FieldSequence::new(run.snapshots).unwrap();
    let c = classify(&seq, &[0.1, 0.05, 0.02]).unwrap();
    assert_eq!(c.verdict, CCVerdict::Compactness, "{}", c.rationale);
}

#[test]
fn kinetic_only_flow_settles_on_the_constant() {
    let grid = Grid::line(20.0, 128, 0.5).unwrap();
    let spec = NonlinearitySpec::zero();
    let run = minimize(&spec, grid, &FlowConfig::with_mass(3.0)).unwrap();
    let flat = Field::constant(grid, (3.0f64 / 20.0).sqrt());
    let err = run.u_star.map(f64::abs).add_scaled(-1.0, &flat).l2_norm();
    assert!(err < 1e-3, "{err}");
    assert!(run.report.total.abs() < 1e-6);
    let cert = certify(&run, &spec, 3.0).unwrap();
    assert!(cert.lambda.abs() < 1e-6 && cert.monotone_energy);
}

#[test]
fn small_mass_on_a_short_box_fills_the_box() {
    // the flat competitor has J = -c^3 / (3 sqrt L), below the whole-line
    // ground state energy -1.574 c^4 / (4 pi^2) once c < 8.36 / sqrt L
    let grid = Grid::line(40.0, 512, 0.5).unwrap();
    let run = minimize(&NonlinearitySpec::pure_power(1.0), grid, &FlowConfig::with_mass(1.0)).unwrap();
    let flat = -1.0 / (3.0 * 40f64.sqrt());
    let line = -1.5740261473 / (4.0 * PI * PI);
    assert!(run.report.total <= flat && flat < line, "{}", run.report.total);
    let v = run.u_star.map(f64::abs);
    let (lo, hi) = v.values().iter().fold((f64::MAX, 0.0f64), |(a, b), x| (a.min(*x), b.max(*x)));
    assert!(lo > 0.3 * hi, "{lo} {hi}");
}
