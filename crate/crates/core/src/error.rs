use std::fmt;

/// Errors raised by the word, morphism and search machinery.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An operation was called outside its domain (empty word, wrong alphabet, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Text input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// A search or stabilization loop ran out of its node or length budget.
    #[error("budget exhausted: {0}")]
    Budget(String),
    /// A claim being verified turned out to be false.
    #[error("verification failed: {0}")]
    Verification(String),
    /// The morphism registry does not match its recorded checksums.
    #[error("registry integrity: {0}")]
    Registry(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl fmt::Display) -> Error {
    Error::Domain(msg.to_string())
}
