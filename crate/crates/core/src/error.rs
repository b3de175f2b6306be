use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by samplers, grid numerics, estimators and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("depth {depth} exceeds the maximum supported depth {max}")]
    DepthOverflow { depth: u32, max: u32 },

    #[error("negative time {0} is outside the domain [0, inf)")]
    NegativeTime(f64),

    #[error("initial function returned {value} at t = {t}, outside [0, 1]")]
    RangeViolation { t: f64, value: f64 },

    #[error("working grid needs {needed} nodes but the cap is {cap}")]
    GridTooLarge { needed: usize, cap: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: malformed file: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("digest mismatch for {path}: manifest has {expected}, file has {actual}")]
    DigestMismatch {
        path: PathBuf,
        expected: String,
        actual: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
