use std::path::PathBuf;

use prepro_core::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 1 for mathematical failures, 2 for usage and I/O, 3 when counting
    /// or stratification cannot be trusted.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::NonPolynomialCount { .. } | Error::UnanchoredStratum { .. } => 3,
                Error::Parse(_)
                | Error::NotPrime(_)
                | Error::DimensionMismatch(_)
                | Error::LoopDetected(_)
                | Error::DuplicateId(_)
                | Error::UnknownVertex(_)
                | Error::UnknownArrow(_)
                | Error::QuiverMismatch
                | Error::FieldMismatch
                | Error::InvalidParameter(_)
                | Error::ShapeMismatch(_)
                | Error::ContentMismatch
                | Error::NotEnoughPrimes(_) => 2,
                _ => 1,
            },
        }
    }
}
