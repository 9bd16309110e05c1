use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("path is empty")]
    EmptyPath,
    #[error("length mismatch: {times} times but {values} values")]
    LengthMismatch { times: usize, values: usize },
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("times not strictly increasing at index {index} ({prev} -> {next})")]
    NotIncreasing { index: usize, prev: f64, next: f64 },
    #[error("invalid threshold c = {0}: {1}")]
    InvalidThreshold(f64, &'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("argument outside the validity domain: {0}")]
    OutOfDomain(String),
    #[error("not enough samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
