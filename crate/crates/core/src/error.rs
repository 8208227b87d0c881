use thiserror::Error;

use crate::word::Word;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("network contains a directed cycle")]
    Cycle,

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("edge {0} is outside the adversary's restricted set")]
    EdgeNotRestricted(usize),

    #[error("edge set {from:?} does not precede {to:?}")]
    NotPreceding { from: Vec<usize>, to: Vec<usize> },

    #[error("ambiguous code: {first} and {second} both reach {output}")]
    Ambiguous {
        first: Word,
        second: Word,
        output: Word,
    },

    #[error("audit refused: code is not unambiguous ({0} and {1} collide)")]
    AuditRefused(Word, Word),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}
