//! Splitting and scaling inequalities for `I_c` at `c = 2`.

use fracgs::analysis::{
    mass_scan, subadditivity_check, theta_scaling_check, SubadditivityMode, SubadditivityOptions,
};
use fracgs::{FlowConfig, Grid, NonlinearitySpec};

fn main() -> fracgs::Result<()> {
    let grid = Grid::line(40.0, 512, 0.5)?;
    let spec = NonlinearitySpec::pure_power(1.0);
    let config = FlowConfig::default();
    let c = 2.0f64;
    let pairs: Vec<(f64, f64)> = [0.5, 1.0, 1.5].iter().map(|&a| (c, a)).collect();

    let mut masses: Vec<f64> = pairs.iter().flat_map(|&(c, a)| [a, (c * c - a * a).sqrt()]).collect();
    masses.push(c);
    masses.sort_by(f64::total_cmp);
    let scan = mass_scan(&spec, grid, &masses, &config, false)?;
    let report = subadditivity_check(&scan, &pairs, SubadditivityMode::Plain, SubadditivityOptions::default())?;
    for r in &report.rows {
        println!(
            "I_{:.3} = {:+.8} <= I_{:.3} + I_{:.3} = {:+.8}  (margin {:.2e})",
            r.c, r.i_c, r.a, r.b, r.i_a + r.i_b, r.margin
        );
    }

    let theta = theta_scaling_check(&spec, grid, 1.0, &[1.0, 1.5, 2.0], &config, 1e-6)?;
    for r in &theta.rows {
        println!("theta {:<4} I = {:+.8}  theta^2 I_1 = {:+.8}", r.theta, r.i_theta_c, r.bound);
    }
    for r in &theta.test_vector {
        println!("theta {:<4} J(theta u) = {:+.8} <= {:+.8}", r.theta, r.energy, r.bound);
    }
    Ok(())
}
