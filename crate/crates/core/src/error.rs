use thiserror::Error;

use crate::posetcore::ValidationError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{what} = {value} is outside the supported range {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: u64,
        min: u64,
        max: u64,
    },

    #[error("index {index} is outside the universe 0..{universe}")]
    IndexOutOfRange { index: u64, universe: u64 },

    #[error("index vector is not strictly increasing at position {position}")]
    NotIncreasing { position: usize },

    #[error("duplicate index value {value}")]
    DuplicateIndex { value: u64 },

    #[error("index vector has {actual} entries, expected {expected}")]
    WrongLength { expected: usize, actual: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("entry ({i},{j}) is not changeable")]
    NotChangeable { i: usize, j: usize },

    #[error("rows are not in increasing integer order at row {row}")]
    RowsNotIncreasing { row: usize },

    #[error("not a valid {kind}: {detail}")]
    InvalidMask { kind: &'static str, detail: String },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Validation(#[from] ValidationError),
}

pub(crate) fn check_range(what: &'static str, value: u64, min: u64, max: u64) -> Result<()> {
    if value < min || value > max {
        return Err(Error::OutOfRange {
            what,
            value,
            min,
            max,
        });
    }
    Ok(())
}
