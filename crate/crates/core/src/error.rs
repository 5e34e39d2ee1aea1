use thiserror::Error;

/// Errors raised while loading inputs or computing measures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(String),

    #[error("line {line}: malformed line: {reason}")]
    MalformedLine { line: usize, reason: String },

    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: String },

    #[error("line {line}: duplicate undirected edge {u} {v}")]
    DuplicateEdge { line: usize, u: String, v: String },

    #[error("line {line}: non-positive edge weight {weight}")]
    NonPositiveWeight { line: usize, weight: f64 },

    #[error("unknown node: {0}")]
    UnknownNode(String),

    #[error("uncovered node: {0}")]
    UncoveredNode(String),

    #[error("node {0} assigned twice")]
    NodeAssignedTwice(String),

    #[error("line {line}: node {node} is not in the graph")]
    NodeNotInGraph { line: usize, node: String },

    #[error("partitions are defined over different node sets")]
    MismatchedNodeSets,

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("graph has no edges")]
    EdgelessGraph,

    #[error("at least {required} elements are required, got {actual}")]
    TooFewElements { required: usize, actual: usize },

    #[error("negative node weight {weight} for node {node}")]
    NegativeWeight { node: String, weight: f64 },

    #[error("node weights sum to zero")]
    ZeroTotalWeight,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("infeasible generation: {0}")]
    Infeasible(String),

    #[error("invalid score data: {0}")]
    InvalidScores(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
