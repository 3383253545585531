//! Error type shared by the whole crate.

use crate::graph::NodeId;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A line of an input file could not be parsed.
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Modularity is undefined when the graph carries no edge weight.
    #[error("modularity undefined: total edge weight is zero")]
    UndefinedScore,

    #[error("null model undefined: every node has zero degree")]
    UndefinedNullModel,

    #[error("distance-decay input must be non-negative, got {0}")]
    NegativeDistance(f64),

    #[error("degenerate centroid: weighted unit-vector sum has near-zero norm")]
    DegenerateCentroid,

    #[error("exhaustive enumeration limited to n <= {limit}, got n = {n}")]
    SizeLimit { n: usize, limit: usize },

    #[error("node {0} not found in graph")]
    NodeNotFound(NodeId),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("partition does not match graph: {0}")]
    PartitionMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
