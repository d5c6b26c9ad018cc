//! `c -> I_c` for the cubic-type power law, and the effect of halving the
//! mass spacing on the largest jump between neighbours.

use fracgs::analysis::mass_scan;
use fracgs::{FlowConfig, Grid, NonlinearitySpec};

fn main() -> fracgs::Result<()> {
    let grid = Grid::line(40.0, 512, 0.5)?;
    let spec = NonlinearitySpec::pure_power(1.0);
    let config = FlowConfig::default();

    let coarse: Vec<f64> = (0..=5).map(|k| 0.5 + 0.5 * k as f64).collect();
    let fine: Vec<f64> = (0..=10).map(|k| 0.5 + 0.25 * k as f64).collect();
    let a = mass_scan(&spec, grid, &coarse, &config, false)?;
    let b = mass_scan(&spec, grid, &fine, &config, false)?;
    print!("{}", b.to_csv()?);
    println!(
        "max adjacent jump: {:.4} (dc = 0.5), {:.4} (dc = 0.25), ratio {:.2}",
        a.max_adjacent_jump,
        b.max_adjacent_jump,
        a.max_adjacent_jump / b.max_adjacent_jump
    );
    Ok(())
}
