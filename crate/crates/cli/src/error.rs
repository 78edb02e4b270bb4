use riordan_core::decompose::DecomposeError;
use riordan_core::gfparse::GfError;
use riordan_core::involution::InvolutionError;
use riordan_core::{RiordanError, SeriesError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Domain(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<RiordanError> for CliError {
    fn from(e: RiordanError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::BadRational(_) | SeriesError::Empty => CliError::Parse(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<GfError> for CliError {
    fn from(e: GfError) -> Self {
        match e {
            GfError::Empty | GfError::Syntax { .. } | GfError::ExponentTooLarge { .. } => {
                CliError::Parse(e.to_string())
            }
            GfError::Series(s) => s.into(),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<InvolutionError> for CliError {
    fn from(e: InvolutionError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<DecomposeError> for CliError {
    fn from(e: DecomposeError) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Domain(e.to_string())
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}
