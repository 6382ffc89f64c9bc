use thiserror::Error;

/// Errors raised by the numeric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` must be positive and finite, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("argument `{name}` must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("vector must have at least one entry")]
    EmptyVector,

    #[error("entry {index} must be finite, got {value}")]
    NonFiniteEntry { index: usize, value: f64 },

    #[error("entry {index} must be strictly positive, got {value}")]
    NonPositiveEntry { index: usize, value: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("z = {z} lies outside the cumulant domain (-{rate}, {rate})")]
    OutsideCumulantDomain { z: f64, rate: f64 },

    #[error("invalid grid `{name}`: {reason}")]
    InvalidGrid { name: &'static str, reason: String },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

impl Error {
    /// True for programmer/usage errors (shape and argument validation), as
    /// opposed to numeric domain violations.
    pub fn is_usage(&self) -> bool {
        !matches!(
            self,
            Error::OutsideCumulantDomain { .. } | Error::NonFinite { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
