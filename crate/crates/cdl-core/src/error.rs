//! Error type shared across the pipeline.

use thiserror::Error;

/// Errors raised by corpus handling, scoring, training, and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed record at {path}:{line}: {reason}")]
    MalformedRecord {
        path: String,
        line: usize,
        reason: String,
    },

    #[error("corpus is empty: {0}")]
    EmptyCorpus(String),

    #[error("unknown attribute {0:?} (expected coherence, informativeness, or specificity)")]
    UnknownAttribute(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed file {path}: {reason}")]
    MalformedFile { path: String, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("non-finite {term} loss in branch {branch} at step {step} (value {value})")]
    NumericalAbort {
        branch: String,
        term: String,
        step: u64,
        value: f64,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
