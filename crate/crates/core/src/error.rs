use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("sector dimension {dim} exceeds the limit of {limit}")]
    Resource { dim: usize, limit: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("state vectors live on different sectors ({left} vs {right})")]
    BasisMismatch { left: String, right: String },

    #[error("no real scattering solution for lambda = {lambdas:?} on N = {n_sites}")]
    NoScatteringSolution { n_sites: usize, lambdas: Vec<i64> },

    #[error("no root found: {0}")]
    NoRoot(String),

    #[error("Newton iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("converged roots do not give an eigenstate (residual {residual:e}): {context}")]
    Misclassified { residual: f64, context: String },

    #[error("state is not translation invariant (overlap with its translate {overlap:.3e})")]
    NotTranslationInvariant { overlap: f64 },

    #[error("empty population")]
    EmptyPopulation,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
