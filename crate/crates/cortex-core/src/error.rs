use std::path::PathBuf;

/// Crate-wide error type.
///
/// Variants are grouped by where the failure belongs in the pipeline so the
/// CLI can map them onto stable exit codes (see [`Error::exit_code`]).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid configuration or usage (bad fractions, bad hyperparameters,
    /// unknown method names, malformed config files).
    #[error("config error: {0}")]
    Config(String),

    /// Problems with input data: CSV structure, encoding, cost-matrix files,
    /// shape mismatches between components.
    #[error("data error: {0}")]
    Data(String),

    /// Black-box predictor failures: missing files, row-count mismatches,
    /// unknown class names, subprocess errors.
    #[error("oracle error: {0}")]
    Oracle(String),

    /// Internal consistency violations that indicate a bug, such as a
    /// contradictory antecedent interval on a tree path.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code for the CLI: 1 usage/config, 2 data, 3 oracle,
    /// 4 internal consistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Data(_) | Error::Io { .. } => 2,
            Error::Oracle(_) => 3,
            Error::Internal(_) => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
