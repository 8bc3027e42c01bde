use std::path::PathBuf;

use thiserror::Error;

use crate::experiment::RunTrace;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("shot budget error: {0}")]
    Budget(String),

    #[error("unsupported operation: {0}")]
    Capability(String),

    #[error("{n_qubits} qubits exceeds the dense-matrix cap of {cap}")]
    Size { n_qubits: usize, cap: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("non-finite value: {0}")]
    Numeric(String),

    /// A run produced non-finite parameters or energies; `partial` holds the
    /// records written up to the failing iteration.
    #[error("run diverged at iteration {iteration}: {message}")]
    Diverged {
        iteration: usize,
        message: String,
        partial: Box<RunTrace>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
