use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: module has parse errors and cannot be analyzed")]
    InvalidModule { path: PathBuf },

    #[error("unknown pattern identifier '{0}'")]
    UnknownPattern(String),

    #[error("invalid layout pattern '{layout}': {reason}")]
    InvalidLayout { layout: String, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Walk(#[from] walkdir::Error),

    #[error("invalid configuration: {0}")]
    Config(String),
}
