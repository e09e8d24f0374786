use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("exponent arithmetic overflowed 64 bits")]
    Overflow,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capability error: {0}")]
    Capability(String),
    #[error("representation error: {0}")]
    Representation(String),
    #[error("index {index} out of range: {reason}")]
    Range { index: i64, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
