//! The energy `J(u) = 1/2 |grad_s u|_2^2 - int F(x, u)`, its L^2 gradient,
//! the Lagrange multiplier and the Euler-Lagrange residual.
//!
//! Sign convention: the constrained critical-point equation is
//! `(-Delta)^s u - dF(x, u) = lambda u`, so `lambda = <J'(u), u> / mass(u)`
//! and a focusing ground state has `lambda < 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{hminus_norm, ops_for, Field};
use crate::nonlinearity::NonlinearitySpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    /// `1/2 |grad_s u|_2^2`
    pub kinetic: f64,
    /// `int F(x, u)` by nodal quadrature
    pub potential: f64,
    pub total: f64,
    pub mass: f64,
    pub lambda: f64,
    /// `|J'(u) - lambda u|_2 / |u|_{H^s}`
    pub el_residual: f64,
    /// `|J'(u)|_{H^-s}`
    pub hminus_gradient_norm: f64,
}

/// `h^N sum_j F(x_j, u_j)`.
pub fn potential(u: &Field, spec: &NonlinearitySpec) -> Result<f64> {
    let grid = u.grid();
    let dim = grid.dim();
    let mut sum = 0.0;
    for (j, &v) in u.values().iter().enumerate() {
        sum += spec.eval_f(&grid.point(j), dim, v)?;
    }
    Ok(grid.cell_volume() * sum)
}

/// `dF(x_j, u_j)` at every node.
pub fn nonlinear_force(u: &Field, spec: &NonlinearitySpec) -> Result<Field> {
    let grid = u.grid();
    let dim = grid.dim();
    let values = u
        .values()
        .iter()
        .enumerate()
        .map(|(j, &v)| spec.eval_df(&grid.point(j), dim, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(Field::from_parts(*grid, values))
}

/// `J(u)` alone, one forward transform.
pub fn total_energy(u: &Field, spec: &NonlinearitySpec) -> Result<f64> {
    let kinetic = 0.5 * ops_for(u.grid()).kinetic(u);
    Ok(kinetic - potential(u, spec)?)
}

/// `J'(u) = (-Delta)^s u - dF(x, u)`.
pub fn gradient(u: &Field, spec: &NonlinearitySpec) -> Result<Field> {
    let lap = ops_for(u.grid()).laplacian(u);
    Ok(lap.add_scaled(-1.0, &nonlinear_force(u, spec)?))
}

/// `lambda(u) = <J'(u), u> / mass(u)`.
pub fn lagrange_multiplier(u: &Field, spec: &NonlinearitySpec) -> Result<f64> {
    let mass = u.mass();
    if mass <= 0.0 {
        return Err(Error::ZeroField);
    }
    Ok(gradient(u, spec)?.inner(u) / mass)
}

/// `|J'(u) - lambda(u) u|_2 / |u|_{H^s}`.
pub fn el_residual(u: &Field, spec: &NonlinearitySpec) -> Result<f64> {
    Ok(evaluate(u, spec)?.residual)
}

/// Everything the flow needs at one iterate.
#[derive(Debug, Clone)]
pub(crate) struct Evaluation {
    pub kinetic: f64,
    pub potential: f64,
    pub total: f64,
    pub mass: f64,
    pub gradient: Field,
    pub lambda: f64,
    pub residual: f64,
}

impl Evaluation {
    pub fn hs_norm(&self) -> f64 {
        (self.mass + 2.0 * self.kinetic).sqrt()
    }
}

pub(crate) fn evaluate(u: &Field, spec: &NonlinearitySpec) -> Result<Evaluation> {
    let mass = u.mass();
    if mass <= 0.0 {
        return Err(Error::ZeroField);
    }
    let (k, lap) = ops_for(u.grid()).kinetic_and_laplacian(u);
    let potential = potential(u, spec)?;
    let gradient = lap.add_scaled(-1.0, &nonlinear_force(u, spec)?);
    let lambda = gradient.inner(u) / mass;
    let residual = gradient.add_scaled(-lambda, u).l2_norm() / (mass + k).sqrt();
    Ok(Evaluation {
        kinetic: 0.5 * k,
        potential,
        total: 0.5 * k - potential,
        mass,
        gradient,
        lambda,
        residual,
    })
}

pub fn energy(u: &Field, spec: &NonlinearitySpec) -> Result<EnergyReport> {
    let e = evaluate(u, spec)?;
    Ok(EnergyReport {
        kinetic: e.kinetic,
        potential: e.potential,
        total: e.total,
        mass: e.mass,
        lambda: e.lambda,
        el_residual: e.residual,
        hminus_gradient_norm: hminus_norm(&e.gradient),
    })
}
