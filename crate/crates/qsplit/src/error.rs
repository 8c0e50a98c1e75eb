//! Failures of the command-line driver and their exit codes.

use qsplit_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable input, malformed JSON, wrong schema or bad flags.
    #[error("parse error: {0}")]
    Parse(String),
    /// Data that parses but does not fit together.
    #[error("shape error: {0}")]
    Shape(String),
    /// A numerical precondition failed (not a projection, invalid Q-system, ...).
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric(_) => 1,
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Shape(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::CellMismatch(_)
            | Error::DimensionMismatch(_)
            | Error::EmptyColumn(_)
            | Error::IllTypedPath(_)
            | Error::InvalidPresentation(_) => CliError::Shape(msg),
            Error::InvalidTolerance(_) => CliError::Parse(msg),
            Error::NotAProjection { .. }
            | Error::NotHermitian(_)
            | Error::InvalidQSystem(_)
            | Error::DegenerateRandomElement(_)
            | Error::NormalizationFailure(_) => CliError::Numeric(msg),
        }
    }
}
