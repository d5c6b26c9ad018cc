//! Spectral `sum |xi|^{2s} |u_hat|^2` against direct Gagliardo quadrature
//! for a few profiles and orders, at two resolutions.

use fracgs::field::{frac_kinetic, gagliardo_kinetic_1d};
use fracgs::{Grid, Profile, ProfileKind};

fn main() -> fracgs::Result<()> {
    println!("{:>5} {:>14} {:>6} {:>16} {:>16} {:>10}", "s", "profile", "M", "spectral", "gagliardo", "rel gap");
    for s in [0.25, 0.5, 0.75] {
        for kind in [ProfileKind::Gaussian, ProfileKind::SechSquared] {
            for m in [512, 1024] {
                let u = Profile::new(kind).sample(Grid::line(40.0, m, s)?)?;
                let a = frac_kinetic(&u);
                let b = gagliardo_kinetic_1d(&u)?;
                println!(
                    "{s:>5} {:>14} {m:>6} {a:>16.12} {b:>16.12} {:>10.2e}",
                    format!("{kind:?}"),
                    (a - b).abs() / a
                );
            }
        }
    }
    Ok(())
}
