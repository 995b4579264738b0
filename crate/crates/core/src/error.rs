use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Every raw weight underflowed to zero at one step.
    #[error("weight collapse: all log-weights are -inf")]
    WeightCollapse,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("model does not support {0}")]
    UnsupportedModel(&'static str),

    #[error("numerical divergence at step {step}: non-finite state")]
    NumericalDivergence { step: usize },

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
