use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unbounded dummy sum: {0}")]
    UnboundedSum(String),
    #[error("truncation exceeded: {0}")]
    Truncation(String),
    #[error("singular translation: {0}")]
    SingularTranslation(String),
    #[error("symplectic condition violated at order {order}: {detail}")]
    Symplectic { order: usize, detail: String },
    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
