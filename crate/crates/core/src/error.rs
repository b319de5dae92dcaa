use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list contains no edges")]
    EmptyInput,

    #[error("node index {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("unknown node label {0:?}")]
    UnknownLabel(String),

    #[error("dimension mismatch: expected length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Carries the best iterate so the caller can decide whether to accept it.
    #[error("conjugate gradient did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    CgNotConverged { iterations: usize, residual: f64, best: Vec<f64> },

    #[error("PPR iteration from node {source_node} did not converge after {iterations} iterations (L1 gap {gap:.3e})")]
    PprNotConverged { source_node: usize, iterations: usize, gap: f64, last: Vec<f64> },

    #[error("graph with {n} nodes exceeds the dense limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("Katz damping {damping} violates the spectral guard (estimated lambda_max = {lambda_max:.6})")]
    SpectralGuard { damping: f64, lambda_max: f64 },

    #[error("split: {0}")]
    Split(String),

    #[error("unrealizable generator parameters: {0}")]
    Unrealizable(String),

    #[error("pair ({u}, {v}): {source}")]
    Pair {
        u: usize,
        v: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("AUPR: {0}")]
    Aupr(String),

    #[error("cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn for_pair(self, u: usize, v: usize) -> Self {
        Error::Pair { u, v, source: Box::new(self) }
    }
}
