//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A hand had the wrong number of cards for the requested operation.
    #[error("expected a hand of {expected} cards, got {got}")]
    HandSize { expected: usize, got: usize },

    /// An agent returned an action the rules do not allow.
    #[error("protocol violation by seat {seat}: {detail}")]
    ProtocolViolation { seat: usize, detail: String },

    /// Invalid configuration value or combination.
    #[error("config error: {0}")]
    Config(String),

    /// Malformed text input (card codes, CSV fields, config lines).
    #[error("parse error: {0}")]
    Parse(String),

    /// A numeric routine could not produce a usable result.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
