use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),
    #[error("unsupported in statevector mode: {0}")]
    UnsupportedInStatevector(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("precondition not asserted: {0}")]
    Precondition(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn circuit(msg: impl Into<String>) -> Self {
        Error::InvalidCircuit(msg.into())
    }

    /// Prefix the message with extra context, keeping the variant.
    pub fn context(self, ctx: impl std::fmt::Display) -> Self {
        match self {
            Error::InvalidArgument(m) => Error::InvalidArgument(format!("{ctx}: {m}")),
            Error::InvalidCircuit(m) => Error::InvalidCircuit(format!("{ctx}: {m}")),
            Error::UnsupportedTopology(m) => Error::UnsupportedTopology(format!("{ctx}: {m}")),
            Error::UnsupportedInStatevector(m) => {
                Error::UnsupportedInStatevector(format!("{ctx}: {m}"))
            }
            Error::ResourceLimit(m) => Error::ResourceLimit(format!("{ctx}: {m}")),
            Error::Precondition(m) => Error::Precondition(format!("{ctx}: {m}")),
            other => other,
        }
    }
}
