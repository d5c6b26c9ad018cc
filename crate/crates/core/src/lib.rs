//! Constrained minimizers of fractional-gradient energies on a periodic box.
//!
//! `J(u) = 1/2 |grad_s u|_2^2 - int F(x, u)` is minimized over the mass
//! sphere `{ int u^2 = c^2 }` with a pseudospectral discretization, and the
//! structure of the infimum `I_c` (negativity, subadditivity, strict
//! comparison with a periodic problem, concentration-compactness of
//! minimizing sequences) is exercised numerically.

pub mod analysis;
pub mod ccdiag;
pub mod energy;
pub mod error;
pub mod field;
pub mod flow;
pub mod nonlinearity;
pub mod runner;
pub mod special;

pub use energy::{energy, EnergyReport};
pub use error::{Error, Result};
pub use nonlinearity::NonlinearitySpec;
pub use flow::{minimize, FlowConfig, MinimizerResult};
pub use field::{normalize_mass, Field, Grid, NormBundle, Profile, ProfileKind};
