//! Exploration of always S-connected temporal graphs.
//!
//! A temporal graph is a vertex set with a sequence of snapshots; agents move
//! along at most one edge per snapshot. This crate builds exploration
//! schedules for `m` agents anchored on a set `S` whose components cover every
//! snapshot, converts them to single-agent schedules, and applies them to
//! graphs with small separators via (r, b)-divisions.
//!
//! Modules:
//! - [`graph`], [`walk`], [`format`]: data model, verification, text formats.
//! - [`reach`]: earliest arrival, walk extraction, reachable-set profiles.
//! - [`strategies`]: anchored exploration building blocks and the epoch explorer.
//! - [`reductions`]: multi-to-single conversion and divisions.
//! - [`gen`]: seeded instance generators.
//! - [`bench`]: experiment runner and bound checks.

pub mod bench;
pub mod bounds;
pub mod error;
pub mod format;
pub mod gen;
pub mod graph;
pub mod reach;
pub mod reductions;
pub mod strategies;
pub mod walk;

pub use error::{DivisionError, FormatError, GraphError, ParseError, ReachError, StrategyError};
pub use graph::{AnchorSet, Edge, StaticGraph, Temporal, TemporalGraph, Time, Vertex};
pub use walk::{verify_schedule, verify_walk, ExplorationSchedule, TemporalWalk};

/// Exact rational used for interval endpoints.
pub type Rational = num_rational::Ratio<i64>;

/// Interval model with exact rational endpoints.
pub type RationalIntervals = reductions::interval::IntervalModel<Rational>;

/// Interval model with floating-point endpoints.
pub type FloatIntervals = reductions::interval::IntervalModel<f64>;

/// Bound formulas evaluated in double precision.
pub type Bounds = bounds::BoundFormulas<f64>;
