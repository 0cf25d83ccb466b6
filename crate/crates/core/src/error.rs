use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph must have at least one node")]
    EmptyGraph,

    #[error("node {node} out of range for {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("self-loop on node {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(usize, usize),

    #[error("no edge {0} -> {1}")]
    MissingEdge(usize, usize),

    #[error("non-finite cost {cost} on edge {from} -> {to}")]
    NonFiniteCost { from: usize, to: usize, cost: f64 },

    #[error("scale K must be positive, got {0}")]
    InvalidScale(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cycle found while walking back from node {0}")]
    CorruptPredecessors(usize),

    #[error("negative cycle reachable from source {0}")]
    NegativeCycle(usize),

    #[error("contrast undefined: summed costs of both paths are zero")]
    ZeroContrastDenominator,

    #[error("location {0} has no feasible neighbour")]
    IsolatedLocation(usize),

    #[error("end event unreachable from start event")]
    Unplannable,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
