//! The concentration-compactness classifier on three constructed sequences
//! and on the iterates of a minimization.

use std::f64::consts::PI;

use fracgs::ccdiag::{classify, synthetic, FieldSequence};
use fracgs::{minimize, FlowConfig, Grid, NonlinearitySpec, Profile};

fn main() -> fracgs::Result<()> {
    let grid = Grid::line(80.0, 1024, 0.5)?;
    let phi = Profile::gaussian();
    let eps = [0.1, 0.05, 0.02];
    let families = [
        ("spreading", synthetic::spreading(grid, &phi, 1.0, 8, 1.0)?),
        ("translates", synthetic::moving_translates(grid, &phi, 3.3, 8, 1.0)?),
        ("separating", synthetic::separating_bumps(grid, &phi, 0.7, 8.0, 4.0, 8, 1.0)?),
    ];
    for (name, fields) in families {
        let c = classify(&FieldSequence::new(fields)?, &eps)?;
        println!("{name:<11} {:?}  {}", c.verdict, c.rationale);
        if let Some(split) = c.splits.last() {
            println!(
                "            last split: R0 {:.3}, Rn {:.3}, masses {:.4} + {:.4}, surplus {:+.2e}",
                split.r0, split.rn, split.mass_v, split.mass_w, split.surplus
            );
        }
    }

    let config = FlowConfig {
        snapshot_every: Some(20),
        ..FlowConfig::with_mass(2.0 * PI)
    };
    let run = minimize(&NonlinearitySpec::pure_power(1.0), grid, &config)?;
    let c = classify(&FieldSequence::new(run.snapshots)?, &eps)?;
    println!("flow        {:?}  {}", c.verdict, c.rationale);
    Ok(())
}
