use thiserror::Error;

/// Errors raised by the symbolic engine and the constructions built on it.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("parameter `{0}` is not bound")]
    UnboundParameter(String),

    #[error("domain error in {op}: {subtree}")]
    Domain { op: &'static str, subtree: String },

    #[error("variable {var} is outside the {dim}-dimensional phase point")]
    VariableOutOfRange { var: String, dim: usize },

    #[error("invalid phase point: {0}")]
    InvalidPoint(String),

    #[error("component of relative order {requested} requested but expansion is only trusted to order {depth}")]
    TruncationExceeded { requested: usize, depth: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("eigenvalue simplicity violated: gap {gap:e} below tolerance {tol:e}")]
    SimplicityViolation { gap: f64, tol: f64 },

    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),

    #[error("invalid spectral data: {0}")]
    InvalidSpectralData(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("validation failed: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
