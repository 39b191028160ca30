use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input: non-finite entries, empty sets, mismatched shapes.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A documented precondition of the operation does not hold.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Evaluation point or radius outside the admissible region.
    #[error("domain error: {0}")]
    Domain(String),

    /// Integration contour does not satisfy the enclosure requirements.
    #[error("contour geometry: {0}")]
    Geometry(String),

    /// The spectrum touches the excluded ray of the logarithm.
    #[error("branch cut: {0}")]
    Branch(String),

    /// Result would overflow double precision.
    #[error("range error: {0}")]
    Range(String),

    /// Iterative decomposition failed or a residual check did not pass.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A generated instance failed its own certification; indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
