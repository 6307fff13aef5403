use crate::specialfn::SpecialFnError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    SpecialFn(#[from] SpecialFnError),
    /// Parameters outside a model's type invariants or validity region.
    #[error("invalid model: {0}")]
    InvalidModel(String),
    /// A sampler was asked for parameters outside the region it covers.
    #[error("sampler region: {0}")]
    Region(String),
    /// A rejection envelope failed its domination audit or its proposal budget.
    #[error("rejection envelope: {0}")]
    Envelope(String),
    /// The Gasper weight series did not reach the requested residual mass.
    #[error("gasper weights truncated at {terms} terms with residual mass {residual:.3e}")]
    Truncation { terms: usize, residual: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("covariance matrix not positive definite even with jitter {jitter:e}")]
    Cholesky { jitter: f64 },
    #[error("bad input: {0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
