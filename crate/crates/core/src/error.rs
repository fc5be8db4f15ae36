//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by model construction, vote evaluation and numerics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A model violates one of its structural invariants.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// An outcome label is not part of the model support.
    #[error("unknown outcome `{0}`")]
    UnknownOutcome(String),

    /// A parameter label or index is not part of the model.
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    /// Two parameter points whose likelihood ratio decreases along the statistic.
    #[error("likelihood ratio {upper}/{lower} decreases between t = {t_left} and t = {t_right}")]
    MlrViolation {
        lower: String,
        upper: String,
        t_left: String,
        t_right: String,
    },

    /// A probability vector does not sum to one.
    #[error("weights sum to {0}, expected 1")]
    WeightSum(String),

    /// Rejection thresholds must be strictly below one.
    #[error("threshold {0} must lie in [0, 1)")]
    Threshold(String),

    /// The requested operation is not defined for this family.
    #[error("operation not supported for family {0}")]
    UnsupportedFamily(String),

    /// Interval bounds are out of order or not numbers.
    #[error("malformed interval: {0}")]
    MalformedInterval(String),

    /// The bracket handed to a root finder does not contain the target level.
    #[error("bracket [{lo}, {hi}] does not straddle level {level}")]
    BracketDoesNotStraddle { lo: String, hi: String, level: String },

    /// A series needed more terms than the iteration cap allows.
    #[error("series did not reach its tail tolerance within {0} terms")]
    IterationCap(usize),

    /// The sample variance is zero, so the vote is undefined.
    #[error("sample variance must be strictly positive")]
    ZeroVariance,

    /// A model file or literal could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidModel(msg.into())
    }

    /// True for errors caused by numeric arguments outside a function's range,
    /// as opposed to malformed input.
    pub fn is_numeric_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::BracketDoesNotStraddle { .. }
                | Error::IterationCap(_)
                | Error::ZeroVariance
        )
    }
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
