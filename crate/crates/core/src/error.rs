use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HillError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("integration failed at x = {x}: step size underflow")]
    IntegrationFailure { x: f64 },
    #[error("root not found for index {n}: {reason}")]
    RootNotFound { n: usize, reason: String },
    #[error("multiplicity error at index {n}: {reason}")]
    Multiplicity { n: usize, reason: String },
    #[error("labeling error at index {n}: {reason}")]
    Labeling { n: usize, reason: String },
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("branch error at index {n}: {reason}")]
    Branch { n: usize, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("depth limit exceeded: k = {k} > {limit}")]
    DepthLimit { k: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, HillError>;
