use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every domain failure the library can report.
///
/// Variant names are part of the CLI contract: `fracgs` prints
/// [`Error::name`] on standard error before exiting with status 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("field is invalid: {0}")]
    InvalidField(String),
    #[error("operation requires a one-dimensional grid, got N = {0}")]
    DimensionUnsupported(usize),
    #[error("field has zero mass")]
    ZeroField,
    #[error("dilated profile needs radius {needed:.4} but the box half-width is {available:.4}")]
    ProfileOverflow { needed: f64, available: f64 },
    #[error("tabulated nonlinearity queried outside its table at {axis} = {value}")]
    TabulationRange { axis: &'static str, value: f64 },
    #[error("hypothesis {0} needs a periodic comparison nonlinearity")]
    MissingComparison(&'static str),
    #[error("flow stopped after {iterations} iterations with residual {residual:e}")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("energy {energy:e} fell below the floor {floor:e}; the nonlinearity is likely mass-supercritical")]
    DivergentEnergy { energy: f64, floor: f64 },
    #[error("scan has no value for c = {0}")]
    InsufficientScan(f64),
    #[error("prerequisite failed: {0}")]
    PrerequisiteFailed(String),
    #[error("radius {radius} exceeds half the box length {half}")]
    RadiusTooLarge { radius: f64, half: f64 },
    #[error("radius ordering violated: {0}")]
    RadiusOrder(String),
    #[error("classification inconclusive: {0}")]
    Inconclusive(String),
    #[error("invariant violated: {rule}")]
    InvariantViolation { rule: String },
    #[error("config schema violation at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::InvalidField(_) => "InvalidField",
            Error::DimensionUnsupported(_) => "DimensionUnsupported",
            Error::ZeroField => "ZeroField",
            Error::ProfileOverflow { .. } => "ProfileOverflow",
            Error::TabulationRange { .. } => "TabulationRange",
            Error::MissingComparison(_) => "MissingComparison",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::DivergentEnergy { .. } => "DivergentEnergy",
            Error::InsufficientScan(_) => "InsufficientScan",
            Error::PrerequisiteFailed(_) => "PrerequisiteFailed",
            Error::RadiusTooLarge { .. } => "RadiusTooLarge",
            Error::RadiusOrder(_) => "RadiusOrder",
            Error::Inconclusive(_) => "Inconclusive",
            Error::InvariantViolation { .. } => "InvariantViolation",
            Error::Schema { .. } => "SchemaViolation",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
            Error::Csv(_) => "Csv",
        }
    }

    pub(crate) fn invariant(rule: impl Into<String>) -> Self {
        Error::InvariantViolation { rule: rule.into() }
    }
}
