use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("invalid track index {track} for arity {arity}")]
    InvalidTrack { track: usize, arity: usize },

    #[error("invalid track permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("unknown relation `{0}`")]
    UnknownRelation(String),

    #[error("formula has free variables not listed: {0:?}")]
    FreeVariables(Vec<String>),

    #[error("automaton exceeded the state budget of {limit}")]
    BudgetExceeded { limit: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("incompatible presentations: {0}")]
    Incompatible(String),

    #[error("value cannot be encoded in this presentation: {0}")]
    NotEncodable(String),

    #[error("sequence source has {available} bits, {needed} requested")]
    FileUnderflow { needed: usize, available: usize },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
