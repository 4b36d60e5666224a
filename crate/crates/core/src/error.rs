use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} requires a nonempty input")]
    Empty { what: &'static str },

    #[error("x = {x} lies outside the {dataset} domain [{lo}, {hi}]")]
    Domain {
        dataset: &'static str,
        x: f64,
        lo: f64,
        hi: f64,
    },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("correlation undefined: need at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("correlation undefined: rank sequence has zero variance")]
    ConstantRanks,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("non-finite training loss (member {member}, epoch {epoch}, batch {batch})")]
    NonFiniteLoss {
        member: usize,
        epoch: usize,
        batch: usize,
    },

    #[error("model file: {0}")]
    ModelFormat(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
