use thiserror::Error;

/// Errors raised by the engine.
///
/// `Input` and `Parse` are caller mistakes. `Invariant` means an internal
/// consistency check failed (a sign bug, a non-commuting chain map, a
/// multiplication map that should be bijective but is not) and the
/// computation must not be trusted.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn invariant<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invariant(msg.into()))
}
