use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("invalid grid spec: {0}")]
    InvalidGrid(String),

    #[error("invalid range {0}: must be >= 1 with at most one decimal")]
    InvalidRange(String),

    #[error("hop count must be >= {min}, got {got}")]
    InvalidHops { min: u32, got: u32 },

    #[error("coloring is partial: node {0} has no color")]
    PartialColoring(NodeId),

    #[error("instance too large: {nodes} nodes exceeds limit {limit}")]
    TooLarge { nodes: usize, limit: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("node {0} has no grid coordinates")]
    MissingCoordinates(NodeId),

    #[error("vector pair was solved for range {pair} but grid uses range {grid}")]
    RangeMismatch { pair: String, grid: String },

    #[error("no feasible vector pair for range {range}, {hops} hops")]
    NoFeasiblePair { range: String, hops: u32 },

    #[error("point ({0}, {1}) lies outside the search window")]
    OutsideWindow(i64, i64),

    #[error("invalid reduction input: {0}")]
    ReductionInput(String),

    #[error("random strategy requires a seed")]
    MissingSeed,

    #[error("no priority given for node {0}")]
    MissingPriority(NodeId),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no termination after {rounds} rounds")]
    NonTermination { rounds: u32, trace: Box<crate::serena::Trace> },

    #[error(transparent)]
    Codec(#[from] crate::serena::codec::CodecError),

    #[error(transparent)]
    Protocol(#[from] crate::serena::ProtocolError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
