//! Energy along the mass-preserving dilations `lambda^{N/2} phi(lambda x)`:
//! the kinetic part follows `lambda^{2s}` exactly while the potential decays
//! faster, so small `lambda` drives `J` below zero.

use fracgs::analysis::dilation_test;
use fracgs::{Grid, NonlinearitySpec, Profile};

fn main() -> fracgs::Result<()> {
    let grid = Grid::line(160.0, 2048, 0.5)?;
    let spec = NonlinearitySpec::pure_power(1.0);
    let ladder: Vec<f64> = (0..=8).map(|k| 2f64.powi(-k)).collect();
    for c in [0.5, 1.0, 2.0] {
        let report = dilation_test(&spec, &Profile::gaussian(), c * c, &ladder, grid)?;
        println!("c = {c}: {:?}, skipped {:?}", report.verdict, report.skipped);
        for row in &report.rows {
            println!(
                "  lambda {:<10} J {:>+14.6e}  kinetic-law error {:.1e}",
                row.lambda, row.energy, row.kinetic_law_error
            );
        }
    }
    Ok(())
}
