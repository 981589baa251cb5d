use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("not a transversal: {0}")]
    NotTransversal(String),
    #[error("algebra tag mismatch: {0} vs {1}")]
    TagMismatch(String, String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("state budget exceeded: {0}")]
    Budget(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("lattice error: {0}")]
    Lattice(String),
}

pub type Result<T> = std::result::Result<T, Error>;
