use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error(
        "level of degree {degree} over d={d} has {size} coefficients, above the guard of {limit}"
    )]
    GuardRail {
        d: usize,
        degree: usize,
        size: usize,
        limit: usize,
    },

    #[error("semigroup parameter must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("operator is not a contraction: norm {0}")]
    NotContraction(f64),

    #[error("operator is not self-adjoint: residual {0}")]
    NotSelfAdjoint(f64),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("unknown operator name `{0}`")]
    UnknownOperator(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("input is not truncation-safe: level {level} is non-zero")]
    NotTruncationSafe { level: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("atom {0} is not covered by any mark bin")]
    AtomNotCovered(usize),

    #[error("kernel has a non-zero diagonal coefficient at cells {0:?}")]
    DiagonalEntry(Vec<usize>),

    #[error("integration mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("at least two paths are required, got {0}")]
    TooFewPaths(usize),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
