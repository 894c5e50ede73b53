use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("inconsistent constraints: {a} and {b} are both must-linked and cannot-linked")]
    InconsistentConstraints { a: String, b: String },

    #[error("no feasible cluster for document {doc_id} after {attempts} attempt(s)")]
    InfeasibleAssignment { doc_id: String, attempts: usize },

    #[error("clustering left cluster {cluster} empty after {attempts} attempt(s)")]
    EmptyCluster { cluster: usize, attempts: usize },

    #[error("clusters {a} and {b} have coincident centroids")]
    CoincidentCentroids { a: usize, b: usize },

    #[error("json error in {context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json {
            context: context.into(),
            source,
        }
    }
}
