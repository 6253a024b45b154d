use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An input value is outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A full-space construction would exceed the configured qubit cap.
    #[error("capacity error: N={n} exceeds the full-space cap {cap} (2^N entries)")]
    Capacity { n: usize, cap: usize },

    /// Operands live in different spaces or representations.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A feature is only implemented for a restricted parameter range.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Two independent computation paths that must agree did not.
    #[error("internal consistency check failed: {0}")]
    Computation(String),

    /// A matrix failed a structural invariant (hermiticity, trace, positivity).
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
}

pub type Result<T> = std::result::Result<T, Error>;
