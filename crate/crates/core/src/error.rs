use std::path::PathBuf;

use thiserror::Error;

use crate::search::SearchStats;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bound must satisfy 1 <= n <= {max}, got {got}")]
    InvalidBound { got: u64, max: u32 },

    #[error("element {elem} outside ground set [1..{n}]")]
    ElementOutOfRange { elem: u64, n: u32 },

    #[error("bound mismatch: expected n={expected}, found n={found}")]
    BoundMismatch { expected: u32, found: u32 },

    #[error("no nonempty set supplied")]
    EmptyInput,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("exact arithmetic overflow")]
    Overflow,

    #[error("search budget exhausted after {} nodes", .0.nodes)]
    BudgetExhausted(SearchStats),

    #[error("sets are not disjoint")]
    NotDisjoint,

    #[error("invalid refutation: {0}")]
    InvalidRefutation(String),

    #[error("member {0} contains no generator of its source")]
    NoGenerator(usize),

    #[error("block sequence exceeds the supported bound ({0})")]
    BoundOverflow(u64),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("cache conflict for {key}: cached threshold {cached}, new threshold {new}")]
    CacheConflict { key: String, cached: u32, new: u32 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("certificate rejected: {0}")]
    Rejected(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
