use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range, expected 1..=3")]
    IndexOutOfRange { index: usize },

    #[error("tensor is not antisymmetric in slots ({0}, {1}): deviation {2:e}")]
    NotAntisymmetric(usize, usize, f64),

    #[error("degenerate spinor: density {density:e} is below the floor {floor:e}")]
    DegenerateSpinor { density: f64, floor: f64 },

    #[error("degenerate spinor at grid point {index}: density {density:e}")]
    DegenerateAt { index: usize, density: f64 },

    #[error("invalid coframe: {0}")]
    InvalidCoframe(String),

    #[error("density must be positive, got {0}")]
    NonPositiveDensity(f64),

    #[error("matrix is not special orthogonal: {0}")]
    NotSpecialOrthogonal(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("field has no time axis")]
    MissingTimeAxis,

    #[error("derivative mode {mode} cannot be applied here: {reason}")]
    UnsupportedDerivative { mode: &'static str, reason: String },

    #[error("inadmissible elastic moduli: {0}")]
    InadmissibleModuli(String),

    #[error("zero spinor")]
    ZeroSpinor,

    #[error("static (p0 = 0) momentum is not allowed")]
    StaticMomentum,

    #[error("finite-difference step {0:e} outside [1e-9, 1e-2]")]
    StepOutOfRange(f64),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("field file: {0}")]
    FieldFile(String),
}
