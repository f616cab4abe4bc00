use thiserror::Error;

use crate::estimators::Sym2;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// The caller supplied arguments that violate an operation's preconditions.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The data are degenerate for the requested computation (for example,
    /// every observation lies on one line through the origin).
    #[error("degenerate sample: {0}")]
    Degenerate(String),

    /// Tyler's fixed-point iteration hit its iteration cap.
    #[error("shape estimator did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        last: Sym2,
    },

    /// The cone rejection sampler could not place a point.
    #[error("rejection sampler gave up after {0} proposals")]
    SamplerExhausted(u64),

    #[error("config error: {0}")]
    Config(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for failures of a numerical procedure rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::Degenerate(_) | Error::SamplerExhausted(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
