use thiserror::Error;

/// Errors raised by the tree, mapping and simulation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("width mismatch: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },

    #[error("dense realization limited to {limit} qubits, got {width}")]
    OracleTooLarge { width: usize, limit: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("unknown node {0}")]
    UnknownNode(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("coefficients are not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
