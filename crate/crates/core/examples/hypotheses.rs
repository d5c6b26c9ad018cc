//! Lattice checks of the growth and scaling hypotheses for a power law and
//! for a tabulated `F(t) = sqrt|t|`, which fails the superquadratic
//! scaling test.

use fracgs::nonlinearity::{check_hypotheses, SamplePlan, Table};
use fracgs::{Grid, NonlinearitySpec};

fn show(spec: &NonlinearitySpec, grid: &Grid) -> fracgs::Result<()> {
    let report = check_hypotheses(spec, &SamplePlan::for_grid(grid))?;
    println!("{}:", report.family);
    for o in &report.outcomes {
        print!("  {:<3} {:?}", o.hypothesis.to_string(), o.verdict);
        if let Some(w) = &o.witness {
            print!("  at t = {:.3e}, theta = {:.3}: {:.4e} vs {:.4e}", w.t, w.theta, w.lhs, w.rhs);
        }
        println!();
    }
    Ok(())
}

fn main() -> fracgs::Result<()> {
    let grid = Grid::line(40.0, 512, 0.5)?;
    show(&NonlinearitySpec::pure_power(1.0), &grid)?;

    // log-spaced nodes over the t range the plan samples
    let mut t_nodes = vec![0.0];
    t_nodes.extend((0..=360).map(|k| 10f64.powf(-6.0 + k as f64 / 40.0)));
    let table = Table {
        radii: vec![0.0],
        values: vec![t_nodes.iter().map(|t| t.sqrt()).collect()],
        t_nodes,
    };
    show(&NonlinearitySpec::tabulated(table, 1.0), &grid)
}
