//! Crate-wide error type.
//!
//! Two failure classes matter to callers: inputs that violate a documented
//! precondition (dimension mismatches, non-reduced data, out-of-range
//! parameters), and computations that cannot be decided within the precision
//! the input carries (truncation windows too narrow). Everything downstream,
//! including CLI exit codes, keys off this split.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// The input violates a documented precondition or is malformed.
    #[error("validation: {0}")]
    Validation(String),
    /// The verdict cannot be decided within the input's truncation window
    /// or bounding box.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn validation<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}

pub(crate) fn precision<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::PrecisionExhausted(msg.into()))
}
