use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Incompatible windows, cutoffs exceeded, or insufficient truncation.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// An operation was called outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("exponent {exponents} lies outside window {window}")]
    OutOfWindow { exponents: String, window: String },

    /// A structural identity that must hold failed; signals a bug, never swallowed.
    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
