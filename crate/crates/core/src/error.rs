use thiserror::Error;

/// Failures surfaced by the lab. Invalid programs are not errors: the
/// decoder reports them as `None`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("cache integrity violation: {0}")]
    Integrity(String),
    #[error("no ({e}, 2^{lambda})-codewords of length {n}")]
    EmptySet { n: usize, e: usize, lambda: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
