use std::fmt;

use thiserror::Error;

use crate::graph::{Time, Vertex};
use crate::walk::ExplorationSchedule;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("snapshot {time} edge {u} {v} not in underlying graph")]
    NotInUnderlying { time: Time, u: Vertex, v: Vertex },
    #[error("snapshot has {found} vertices, expected {expected}")]
    VertexCountMismatch { expected: usize, found: usize },
    #[error("anchor set is empty")]
    EmptyAnchors,
    #[error("duplicate anchor {0}")]
    DuplicateAnchor(Vertex),
    #[error("empty snapshot window")]
    EmptyWindow,
    #[error("window {start}..={end} outside lifetime 1..={lifetime}")]
    WindowOutOfRange { start: Time, end: Time, lifetime: Time },
    #[error("snapshot policy mismatch: {0}")]
    PolicyMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("unexpected end of input, expected {0}")]
    UnexpectedEof(&'static str),
    #[error("snapshot index gap: expected {expected}, found {found}")]
    SnapshotGap { expected: Time, found: Time },
    #[error("{0}")]
    Graph(GraphError),
}

/// A parse failure with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn new(line: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, kind }
    }
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReachError {
    #[error("vertex {0} is not reachable in the window")]
    Unreachable(Vertex),
    #[error("vertices not connected in snapshot {0}")]
    NotConnected(Time),
    #[error("need at least {needed} snapshots, got {got}")]
    TooFewSnapshots { needed: usize, got: usize },
    #[error("snapshot list not strictly increasing at position {0}")]
    NotIncreasing(usize),
    #[error("snapshot {time}: vertex {vertex} has no anchor in its component")]
    NotSConnected { time: Time, vertex: Vertex },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Error)]
pub enum StrategyError {
    #[error("lifetime exhausted after {epochs_completed} epochs; {} vertices uncovered", uncovered.len())]
    LifetimeExhausted {
        partial: Box<ExplorationSchedule>,
        uncovered: Vec<Vertex>,
        epochs_completed: usize,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{what}: got {got}, bound {bound}")]
    BoundViolated {
        what: &'static str,
        got: usize,
        bound: usize,
    },
    #[error("go-and-return split of {} below threshold {}", .0.subset.len(), .0.threshold)]
    SplitBelowThreshold(Box<crate::strategies::GoReturnSplit>),
    #[error("no temporally connected pair in the window")]
    NoPair,
    #[error(transparent)]
    Reach(#[from] ReachError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Division(#[from] DivisionError),
}

impl StrategyError {
    /// The partial schedule carried by a lifetime-exhaustion error.
    pub fn partial(&self) -> Option<&ExplorationSchedule> {
        match self {
            StrategyError::LifetimeExhausted { partial, .. } => Some(partial),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisionError {
    #[error("decomposition width {width} exceeds declared bound {declared}")]
    WidthExceeded { width: usize, declared: usize },
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("largest clique {largest} is not below the budget {budget}")]
    CliqueTooLarge { largest: usize, budget: usize },
    #[error("invalid division: {0}")]
    Invalid(DivisionViolation),
    #[error("component {0} has no boundary vertex to anchor agents")]
    EmptyBoundary(usize),
    #[error("could not relocate agent {agent} to component {component}")]
    Relocation { agent: usize, component: usize },
    #[error("no progress while splitting a piece of size {0}")]
    Stuck(usize),
}

/// First violated division property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivisionViolation {
    ComponentTooLarge { component: usize, size: usize, r: usize },
    BoundaryTooLarge { component: usize, size: usize, b: usize },
    BoundaryMismatch { component: usize },
    StrayEdge { u: Vertex, v: Vertex },
    NotPartition(Vertex),
    NotStrict { components: usize, limit: usize },
}

impl fmt::Display for DivisionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisionViolation::ComponentTooLarge { component, size, r } => {
                write!(f, "component {component} has {size} vertices > r = {r}")
            }
            DivisionViolation::BoundaryTooLarge { component, size, b } => {
                write!(f, "component {component} has {size} boundary vertices > b = {b}")
            }
            DivisionViolation::BoundaryMismatch { component } => {
                write!(
                    f,
                    "component {component} boundary differs from its separator neighbours"
                )
            }
            DivisionViolation::StrayEdge { u, v } => {
                write!(f, "edge {u} {v} joins two different components")
            }
            DivisionViolation::NotPartition(v) => {
                write!(f, "vertex {v} is not covered exactly once")
            }
            DivisionViolation::NotStrict { components, limit } => {
                write!(f, "{components} components exceed the strictness limit {limit}")
            }
        }
    }
}
