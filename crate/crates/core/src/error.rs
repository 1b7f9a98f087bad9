use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller broke an operation's precondition (empty active set, step
    /// length outside its admissible interval, ...).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("input matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("input matrix is not square ({rows} rows, {cols} columns)")]
    NotSquare { rows: usize, cols: usize },

    #[error("linear minimization direction is zero")]
    ZeroDirection,

    #[error("eigenvector iteration did not converge after {iterations} iterations (residual {residual:e})")]
    EigenNotConverged { iterations: usize, residual: f64 },

    #[error("Gram system is singular beyond ridge regularization at node {0}")]
    SingularGram(usize),

    #[error("unsupported dimension {0} (at most 3 supported)")]
    UnsupportedDimension(usize),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::ContractViolation(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Configuration(msg.into())
    }

    /// True for errors caused by how a run was set up rather than by what
    /// happened during it.
    pub fn is_configuration(&self) -> bool {
        matches!(
            self,
            Error::Configuration(_) | Error::UnsupportedDimension(_) | Error::DimensionMismatch { .. }
        )
    }
}
