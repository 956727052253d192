use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The exact (unscaled) value does not fit in a double. Callers should
    /// switch to the scaled or logarithmic form named in the message.
    #[error("overflow: {0}")]
    Overflow(String),

    /// An iterative method exhausted its budget without meeting its tolerance.
    #[error("{method} did not converge: {detail}")]
    NoConvergence { method: &'static str, detail: String },

    /// A computed result failed its own accuracy self-check.
    #[error("accuracy check failed: {0}")]
    Accuracy(String),
}

pub type Result<T> = std::result::Result<T, Error>;
