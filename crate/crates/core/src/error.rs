use thiserror::Error;

use crate::series::SeriesKind;

pub type Result<T> = std::result::Result<T, CrqaError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CrqaError {
    #[error("empty time series")]
    EmptySeries,

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("categorical value {value} at index {index} is not an integer code")]
    NonIntegral { index: usize, value: f64 },

    #[error("degenerate normalization: series has zero standard deviation")]
    DegenerateNormalization,

    #[error("series too short to embed: length {len}, embed {embed}, delay {delay}")]
    TooShortToEmbed {
        len: usize,
        embed: usize,
        delay: usize,
    },

    #[error("embedding dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length difference {diff} exceeds tolerated maximum {max}")]
    LengthMismatch { diff: usize, max: usize },

    #[error("categorical method on continuous data")]
    NotCategorical,

    #[error("mixed series kinds: {0:?} vs {1:?}")]
    KindMismatch(SeriesKind, SeriesKind),

    #[error("zero-entropy series")]
    ZeroEntropy,

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        source: Box<CrqaError>,
    },
}

impl CrqaError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        CrqaError::InvalidParameter(msg.into())
    }

    /// Wraps the error with the name of the pipeline stage that produced it.
    pub fn in_stage(self, stage: &'static str) -> Self {
        CrqaError::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
