use thiserror::Error;

use crate::instance::Pair;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("pair endpoints must differ (got {0}, {0})")]
    DegeneratePair(usize),
    #[error("negative value {0}")]
    Negative(String),
    #[error("duplicate pair {0}")]
    DuplicatePair(Pair),
    #[error("edge index {0} does not exist")]
    DanglingEdge(usize),
    #[error("pair {0} is not a positive-penalty pair of the instance")]
    UnknownPair(Pair),
    #[error("moat {0} does not exist")]
    UnknownMoat(usize),
    #[error("flow network has an uncapacitated source-sink path")]
    UnboundedFlow,
    #[error("static coloring is invalid: max-flow {flow} < total duration {total}; minimal cut source side: {cut}")]
    InvalidColoring {
        flow: String,
        total: String,
        cut: String,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(
        "oracle limit exceeded: {edges} edges / {pairs} pairs (max {max_edges} / {max_pairs})"
    )]
    OracleLimit {
        edges: usize,
        pairs: usize,
        max_edges: usize,
        max_pairs: usize,
    },
    #[error("argument error: {0}")]
    Argument(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
