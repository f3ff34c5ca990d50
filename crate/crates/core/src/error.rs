use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {0} exceeds the maximum supported dimension {max}", max = crate::qcore::MAX_DIM)]
    DimensionTooLarge(usize),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("enumeration guard exceeded: {count} strategies requested, limit is {limit}")]
    GuardExceeded { count: u128, limit: u128 },
}
