//! Error type shared across the crate.

use crate::graph::NodeId;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A node index is outside `[0, n)`.
    #[error("node index {index} out of range for {n} nodes")]
    InvalidNode { index: NodeId, n: usize },

    /// An argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two graphs that must share a node count do not.
    #[error("node count mismatch: {left} vs {right}")]
    ShapeMismatch { left: usize, right: usize },

    /// A relation that must be acyclic contains a directed cycle.
    #[error("relation contains a directed cycle")]
    CyclicRelation,

    /// A parent map or edge list does not describe a rooted tree.
    #[error("invalid tree: {0}")]
    InvalidTree(String),

    /// A text file or record does not match its format.
    #[error("format error: {0}")]
    Format(String),

    /// Strict estimation was requested but some nodes were never blocked.
    #[error("insufficient data: nodes never blocked (1-based): {0:?}")]
    InsufficientData(Vec<usize>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code convention: 1 for format/argument errors,
    /// 2 when strict estimation ran out of data.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InsufficientData(_) => 2,
            _ => 1,
        }
    }
}
