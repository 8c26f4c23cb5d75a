use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid partition {parts:?}: {reason}")]
    InvalidPartition { parts: Vec<usize>, reason: String },

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("size guard: dimension {dim} exceeds limit {limit} (set SCHUR_DFS_MAX_DIM to override)")]
    SizeLimit { dim: usize, limit: usize },

    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    /// The input violates a physical or structural invariant (closure, tracelessness, ...).
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// A self-check inside the library failed.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("unknown example channel '{0}'")]
    UnknownChannel(String),

    #[error("invalid parameter '{name}': {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("block structure violated: leakage {leakage:e} exceeds tolerance {tol:e}")]
    StructureViolation { leakage: f64, tol: f64 },

    #[error("no sector with protected dimension >= 2")]
    NoProtectedSector,

    #[error("{path}: {reason}")]
    Parse { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
