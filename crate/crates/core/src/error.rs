use thiserror::Error;

/// Errors raised by the library. Solver outcomes that are not failures of
/// the caller's input (infeasibility, stalls) live in [`crate::conic::SdpStatus`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("vector norm is {norm}, expected 1")]
    NotNormalized { norm: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("eigendecomposition did not converge")]
    EigenFailure,

    #[error("invalid dimension {0}: must be at least 2")]
    InvalidDimension(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid assemblage: {0}")]
    InvalidAssemblage(String),

    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),

    #[error("invalid probability table: {0}")]
    InvalidDistribution(String),

    #[error("{count} deterministic strategies exceed the cap of {cap}")]
    TooManyStrategies { count: u128, cap: u64 },

    #[error("malformed SDP: {0}")]
    MalformedProblem(String),

    #[error("solver failed: {0}")]
    SolverFailure(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
