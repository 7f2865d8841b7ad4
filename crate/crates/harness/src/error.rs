use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by file formats, configuration and the experiment runner.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    /// Malformed matrix file. `offset` is the byte (DMAT) or line (CSV)
    /// position of the offending field.
    #[error("{path}: {field} at {unit} {offset}: {msg}")]
    Format {
        path: PathBuf,
        field: &'static str,
        unit: &'static str,
        offset: u64,
        msg: String,
    },

    #[error("{path}: CSV error: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    /// Invalid flags or configuration.
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] nyspca_core::Error),
}

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }

    pub(crate) fn dmat(path: impl Into<PathBuf>, field: &'static str, offset: u64, msg: impl Into<String>) -> Self {
        HarnessError::Format { path: path.into(), field, unit: "byte offset", offset, msg: msg.into() }
    }

    pub(crate) fn csv_line(path: impl Into<PathBuf>, field: &'static str, line: u64, msg: impl Into<String>) -> Self {
        HarnessError::Format { path: path.into(), field, unit: "line", offset: line, msg: msg.into() }
    }

    /// Process exit code: 1 for usage errors, 2 for data and format errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) | HarnessError::Core(nyspca_core::Error::InvalidParameter(_)) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
