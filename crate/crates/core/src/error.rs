use std::path::PathBuf;

use thiserror::Error;

use crate::arbitration::NodeId;

/// Errors raised while validating arbitration inputs, simulator setup and
/// traffic files.
#[derive(Debug, Error)]
pub enum Error {
    #[error("network needs at least {min} nodes, got {got}")]
    TooFewNodes { min: usize, got: usize },

    #[error("node {node} out of range for a {num_nodes}-node network")]
    NodeOutOfRange { node: usize, num_nodes: usize },

    #[error("sub-stream word must be {expected} bits, got {actual}")]
    WordLength { expected: usize, actual: usize },

    #[error("invalid bit character {0:?} in sub-stream word")]
    BadBit(char),

    #[error("no sub-stream vector for node {0}")]
    MissingNode(NodeId),

    #[error("node {0} requests a transfer to itself")]
    SelfDirected(NodeId),

    #[error("priority map is not a permutation of 0..{0}")]
    NotAPermutation(usize),

    #[error("invalid allocation request p={p}, q={q}, M={m} (need 0 <= p < q <= M)")]
    InvalidAllocation { p: usize, q: usize, m: usize },

    #[error("invalid message {id}: {reason}")]
    InvalidMessage { id: u64, reason: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid traffic parameters: {0}")]
    InvalidTraffic(String),

    #[error("{path}:{line}: {reason}")]
    Trace {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
