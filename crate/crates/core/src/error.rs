use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("bilinear form is degenerate on lattice {0}")]
    Degenerate(String),

    #[error("element is not homogeneous: found weights {0} and {1}")]
    NonHomogeneous(String, String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("resource budget exhausted: {0}")]
    Resource(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
