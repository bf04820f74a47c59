//! Crate-wide error type.
//!
//! Every failure mode carries enough context to be actionable from the CLI:
//! configuration errors (bad grid, inconsistent parameters) are distinguished
//! from numerical failures (a solve leaving its guaranteed basin, a precondition
//! measured false) and from I/O problems, because the CLI maps them to distinct
//! exit codes.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid or inconsistent configuration (bad grid size, parameter out of
    /// its documented range, mismatched field shapes).
    #[error("configuration: {0}")]
    Config(String),

    /// A documented precondition of an operation was checked at runtime and
    /// found false (e.g. the energy profile does not dominate the stress, or a
    /// resolvability bound fails on the chosen grid).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A numerical solve failed (Newton iteration left its basin, a matrix was
    /// singular beyond tolerance, an iteration diverged).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// File format or I/O failure while reading/writing field dumps.
    #[error("field I/O: {0}")]
    Io(String),
}

impl Error {
    /// Helper for formatted configuration errors.
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Helper for formatted precondition errors.
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Helper for formatted numerical errors.
    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Helper for formatted I/O errors.
    pub fn io(msg: impl Into<String>) -> Self {
        Error::Io(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
