use thiserror::Error;

/// Errors raised by graph construction, oracles, the ordered structures and
/// the sorter.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("graph contains a directed cycle")]
    CycleDetected,

    #[error("rank assignment is not a permutation of 0..{n}: {reason}")]
    InvalidPermutation { n: usize, reason: String },

    #[error("order is not a linear extension: edge {from} -> {to} violated")]
    NotAnExtension { from: usize, to: usize },

    #[error("precedes() called with the same element {0} twice")]
    SameElement(usize),

    #[error("element {0} is not present")]
    ElementAbsent(usize),

    #[error("element {0} is already present")]
    DuplicateElement(usize),

    #[error("finger {finger} does not precede search key {key}")]
    FingerNotBefore { finger: usize, key: usize },

    #[error("n = {n} exceeds the exact-counting limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("bad generator parameters: {0}")]
    BadParams(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
