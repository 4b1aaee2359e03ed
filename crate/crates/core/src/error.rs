use thiserror::Error;

use crate::polyseq::SequenceError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("index {n} is below the sequence start {start}")]
    OutOfDomain { n: i64, start: i64 },

    #[error("rule has a pole at n = {n}")]
    Pole { n: i64 },

    #[error("invalid sequence: {0}")]
    Sequence(#[from] SequenceError),

    #[error("partial numerator a_{n} vanishes; the fraction would terminate")]
    ZeroPartialNumerator { n: i64 },

    #[error("no convergence within depth {depth}; last convergents: {}", last.join(", "))]
    NoConvergence { depth: usize, last: Vec<String> },

    #[error("pi oracle inconsistency: {0}")]
    OracleInconsistency(String),

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("scaling factor r_{n} is zero")]
    InvalidScaling { n: i64 },

    #[error("|L| = {0} lies outside the Worpitzky disk")]
    OutOfDisk(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
