use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid step function: {0}")]
    InvalidStepFn(String),
    #[error("invalid weight function: {0}")]
    InvalidWeight(String),
    #[error("parameter out of range: {0}")]
    Domain(String),
    #[error("rational arithmetic overflow")]
    Overflow,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("Jacobi eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("unsupported norm for this operation: {0}")]
    Unsupported(String),
    #[error("linear program failed: {0}")]
    LinearProgram(String),
    #[error("dimension {n} exceeds the supported limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("inadmissible profile: {0}")]
    Inadmissible(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
