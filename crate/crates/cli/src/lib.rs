//! Spec loading, report formatting and verification suites behind the
//! `polycoef` command-line tool.

pub mod commands;
pub mod report;
pub mod spec;
pub mod suite;

use std::fmt::Display;

use thiserror::Error;

use polycoef::catring::CatRingError;
use polycoef::cats::CatError;
use polycoef::funrep::FunRepError;
use polycoef::invariants::InvariantError;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input, located in the file it came from.
    #[error("{file}: {location}: {message}")]
    Input {
        file: String,
        location: String,
        message: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Computation(String),
    /// An internal consistency check failed.
    #[error("check failed: {0}")]
    Violation(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn input(file: &str, location: impl Into<String>, message: impl Display) -> Self {
        CliError::Input {
            file: file.to_string(),
            location: location.into(),
            message: message.to_string(),
        }
    }

    /// `1` for a failed check, `2` for anything wrong with the input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Violation(_) => 1,
            _ => 2,
        }
    }
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::FormulaMismatch { .. } => CliError::Violation(e.to_string()),
            other => CliError::Computation(other.to_string()),
        }
    }
}

impl From<CatError> for CliError {
    fn from(e: CatError) -> Self {
        CliError::Computation(e.to_string())
    }
}

impl From<FunRepError> for CliError {
    fn from(e: FunRepError) -> Self {
        CliError::Computation(e.to_string())
    }
}

impl From<CatRingError> for CliError {
    fn from(e: CatRingError) -> Self {
        match e {
            CatRingError::Invariant(inner) => inner.into(),
            other => CliError::Computation(other.to_string()),
        }
    }
}
