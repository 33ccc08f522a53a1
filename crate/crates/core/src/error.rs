use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },
    #[error("basis mismatch: {0}")]
    BasisMismatch(&'static str),
    #[error("index {index} out of range (limit {limit})")]
    OutOfRange { index: usize, limit: usize },
    #[error("size {size} exceeds bound {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("non-finite state at step {step}")]
    NonFinite { step: usize },
    #[error("iterate diverged at iteration {iteration}")]
    Diverged { iteration: usize },
    #[error("polynomial is not normalized: E|f|^2 = {norm}")]
    NotNormalized { norm: f64 },
    #[error("no overlap band: {0}")]
    NoBand(&'static str),
    #[error("empty input: {0}")]
    Empty(&'static str),
}

pub(crate) fn invalid(name: &'static str, reason: &'static str) -> Error {
    Error::InvalidParameter { name, reason }
}
