use thiserror::Error;

/// Every fallible operation in the library reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field: {0}")]
    Field(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("not a conic: {0}")]
    NotConic(String),
    #[error("not a Baer subplane: {0}")]
    NotBaer(String),
    #[error("decomposition: {0}")]
    Decomp(String),
    #[error("M={m} is not below the simplification threshold {threshold} for r={r}")]
    Threshold { r: usize, m: usize, threshold: String },
    #[error("construction: {0}")]
    Construction(String),
    #[error("inconsistent bounds at r={r}: lo {lo} > hi {hi}")]
    Inconsistent { r: usize, lo: usize, hi: usize },
    #[error("witness rejected: {0}")]
    Witness(String),
    #[error("search: {0}")]
    Search(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Param(msg.into()))
}
