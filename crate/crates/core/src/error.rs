use thiserror::Error;

/// Errors raised while building or evaluating Gaussian product moments.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MomentError {
    #[error("exponent vector must not be empty")]
    EmptyMultiIndex,

    /// `position` is 1-based.
    #[error("negative exponent at position {position}")]
    NegativeExponent { position: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("covariance matrix is not square")]
    NotSquare,

    /// Indices are 1-based.
    #[error("covariance not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },

    #[error("exponent matrix is not admissible for the given exponents")]
    Inadmissible,

    #[error("{0}")]
    OutOfRange(String),

    #[error("covariance not positive semidefinite (pivot {pivot} at row {row})")]
    NotPositiveSemidefinite { row: usize, pivot: f64 },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Parse(String),

    /// An exact integer division left a remainder. Never expected; fatal.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl MomentError {
    /// True for failures that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, MomentError::Invariant(_))
    }
}

pub type Result<T, E = MomentError> = std::result::Result<T, E>;
