//! Ground state of the half-Laplacian with a quadratic nonlinearity, compared
//! with the Benjamin-Ono soliton `Q(x) = 2 / (1 + x^2)`.
//!
//! Run with `cargo run --release --example soliton`.

use std::f64::consts::PI;
use std::time::Instant;

use fracgs::field::align;
use fracgs::flow::certify;
use fracgs::{minimize, Field, FlowConfig, Grid, NonlinearitySpec};

fn main() -> fracgs::Result<()> {
    let grid = Grid::line(80.0, 2048, 0.5)?;
    let spec = NonlinearitySpec::pure_power(1.0);
    let mut config = FlowConfig::with_mass(2.0 * PI);
    config.el_tol = 1e-6;

    let start = Instant::now();
    let result = minimize(&spec, grid, &config)?;
    let elapsed = start.elapsed();

    let q = Field::from_fn(grid, |x| 2.0 / (1.0 + x[0] * x[0]))?;
    let (aligned, shift) = align(&result.u_star, &q);
    let err = aligned.add_scaled(-1.0, &q).l2_norm() / q.l2_norm();
    let cert = certify(&result, &spec, config.c2)?;

    println!("iterations      {}", result.iterations);
    println!("converged       {}", result.converged);
    println!("J(u*)           {:.10}", result.report.total);
    println!("lambda          {:.10}", result.report.lambda);
    println!("el residual     {:.3e}", result.report.el_residual);
    println!("shift onto Q    {:.3e}", shift[0]);
    println!("|u* - Q| / |Q|  {err:.3e}");
    println!("monotone        {}", cert.monotone_energy);
    println!("wall time       {elapsed:.2?}");
    Ok(())
}
