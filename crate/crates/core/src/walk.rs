//! Temporal walks, exploration schedules and their verification.

use std::collections::BTreeSet;
use std::fmt;

use crate::graph::{Temporal, Time, Vertex};

/// One move: traverse `from -> to` during snapshot `time`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub from: Vertex,
    pub to: Vertex,
    pub time: Time,
}

/// A walk with strictly increasing step times. Waiting is implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalWalk {
    start: Vertex,
    steps: Vec<Step>,
}

impl TemporalWalk {
    pub fn new(start: Vertex) -> Self {
        TemporalWalk {
            start,
            steps: Vec::new(),
        }
    }

    /// Builds a walk from raw steps without checking them; see [`verify_walk`].
    pub fn from_steps(start: Vertex, steps: Vec<Step>) -> Self {
        TemporalWalk { start, steps }
    }

    pub fn start(&self) -> Vertex {
        self.start
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Current end vertex.
    pub fn end(&self) -> Vertex {
        self.steps.last().map_or(self.start, |s| s.to)
    }

    /// Time of the last step, if any.
    pub fn last_time(&self) -> Option<Time> {
        self.steps.last().map(|s| s.time)
    }

    pub fn first_time(&self) -> Option<Time> {
        self.steps.first().map(|s| s.time)
    }

    /// Appends a step.
    ///
    /// # Panics
    /// If the step does not continue from the current end or its time does not
    /// exceed the previous step's time.
    pub fn push(&mut self, from: Vertex, to: Vertex, time: Time) {
        assert_eq!(from, self.end(), "step does not continue the walk");
        if let Some(last) = self.last_time() {
            assert!(time > last, "step time {time} not after {last}");
        }
        self.steps.push(Step { from, to, time });
    }

    /// Appends `other`, which must start at this walk's end and strictly after
    /// its last step.
    pub fn append(&mut self, other: &TemporalWalk) {
        assert_eq!(other.start, self.end(), "walks do not meet");
        for s in &other.steps {
            self.push(s.from, s.to, s.time);
        }
    }

    /// Start vertex plus every step endpoint, in walk order (with repeats).
    pub fn visits(&self) -> impl Iterator<Item = Vertex> + '_ {
        std::iter::once(self.start).chain(self.steps.iter().map(|s| s.to))
    }

    /// Vertex occupied after all steps with time `<= t` have been taken.
    pub fn position_at(&self, t: Time) -> Vertex {
        let idx = self.steps.partition_point(|s| s.time <= t);
        if idx == 0 {
            self.start
        } else {
            self.steps[idx - 1].to
        }
    }

    /// Maps vertex ids through `f`.
    pub fn map_vertices(&self, f: impl Fn(Vertex) -> Vertex) -> TemporalWalk {
        TemporalWalk {
            start: f(self.start),
            steps: self
                .steps
                .iter()
                .map(|s| Step {
                    from: f(s.from),
                    to: f(s.to),
                    time: s.time,
                })
                .collect(),
        }
    }
}

/// One walk per agent plus the target set the schedule claims to cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplorationSchedule {
    pub walks: Vec<TemporalWalk>,
    pub target: Vec<Vertex>,
}

impl ExplorationSchedule {
    pub fn new(walks: Vec<TemporalWalk>, mut target: Vec<Vertex>) -> Self {
        target.sort_unstable();
        target.dedup();
        ExplorationSchedule { walks, target }
    }

    /// Agents parked at `starts`, no moves yet.
    pub fn idle(starts: &[Vertex], target: Vec<Vertex>) -> Self {
        Self::new(starts.iter().map(|&v| TemporalWalk::new(v)).collect(), target)
    }

    /// Largest step time over all walks; 0 when every walk is empty.
    pub fn makespan(&self) -> Time {
        self.walks.iter().filter_map(TemporalWalk::last_time).max().unwrap_or(0)
    }

    pub fn covered(&self) -> BTreeSet<Vertex> {
        self.walks.iter().flat_map(TemporalWalk::visits).collect()
    }

    pub fn uncovered(&self) -> Vec<Vertex> {
        let covered = self.covered();
        self.target.iter().copied().filter(|v| !covered.contains(v)).collect()
    }

    pub fn positions_at(&self, t: Time) -> Vec<Vertex> {
        self.walks.iter().map(|w| w.position_at(t)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationReason {
    VertexOutOfRange(Vertex),
    SelfLoop(Vertex),
    Discontinuous { expected: Vertex, found: Vertex },
    TimeOutOfRange(Time),
    NotIncreasing { previous: Time, time: Time },
    InactiveEdge { u: Vertex, v: Vertex, time: Time },
}

impl fmt::Display for ViolationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationReason::VertexOutOfRange(v) => write!(f, "vertex {v} out of range"),
            ViolationReason::SelfLoop(v) => write!(f, "self-loop at {v}"),
            ViolationReason::Discontinuous { expected, found } => {
                write!(f, "discontinuous: expected start {expected}, found {found}")
            }
            ViolationReason::TimeOutOfRange(t) => write!(f, "time {t} outside lifetime"),
            ViolationReason::NotIncreasing { previous, time } => {
                write!(f, "time {time} not after {previous}")
            }
            ViolationReason::InactiveEdge { u, v, time } => {
                write!(f, "inactive edge {u} {v} at snapshot {time}")
            }
        }
    }
}

/// First failing step of a walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkViolation {
    pub step: usize,
    pub reason: ViolationReason,
}

impl fmt::Display for WalkViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.step, self.reason)
    }
}

/// Checks that the walk is continuous, its times strictly increase within
/// `1..=T`, and each edge is active at its time.
pub fn verify_walk<G: Temporal + ?Sized>(g: &G, w: &TemporalWalk) -> Result<(), WalkViolation> {
    let n = g.vertex_count();
    let fail = |step, reason| Err(WalkViolation { step, reason });
    if w.start as usize >= n {
        return fail(0, ViolationReason::VertexOutOfRange(w.start));
    }
    let mut at = w.start;
    let mut previous: Option<Time> = None;
    for (i, s) in w.steps.iter().enumerate() {
        for v in [s.from, s.to] {
            if v as usize >= n {
                return fail(i, ViolationReason::VertexOutOfRange(v));
            }
        }
        if s.from != at {
            return fail(
                i,
                ViolationReason::Discontinuous {
                    expected: at,
                    found: s.from,
                },
            );
        }
        if s.from == s.to {
            return fail(i, ViolationReason::SelfLoop(s.from));
        }
        if s.time < 1 || s.time > g.lifetime() {
            return fail(i, ViolationReason::TimeOutOfRange(s.time));
        }
        if let Some(p) = previous {
            if s.time <= p {
                return fail(
                    i,
                    ViolationReason::NotIncreasing {
                        previous: p,
                        time: s.time,
                    },
                );
            }
        }
        if !g.snapshot(s.time).has_edge(s.from, s.to) {
            return fail(
                i,
                ViolationReason::InactiveEdge {
                    u: s.from,
                    v: s.to,
                    time: s.time,
                },
            );
        }
        previous = Some(s.time);
        at = s.to;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScheduleViolation {
    pub walk: usize,
    pub step: usize,
    pub reason: ViolationReason,
}

impl fmt::Display for ScheduleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "walk {} step {}: {}", self.walk, self.step, self.reason)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleReport {
    pub uncovered: Vec<Vertex>,
    pub violation: Option<ScheduleViolation>,
}

impl ScheduleReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none() && self.uncovered.is_empty()
    }
}

/// Validates every walk and reports target vertices left uncovered.
pub fn verify_schedule<G: Temporal + ?Sized>(g: &G, sched: &ExplorationSchedule) -> ScheduleReport {
    let violation = sched.walks.iter().enumerate().find_map(|(i, w)| {
        verify_walk(g, w).err().map(|v| ScheduleViolation {
            walk: i,
            step: v.step,
            reason: v.reason,
        })
    });
    ScheduleReport {
        uncovered: sched.uncovered(),
        violation,
    }
}
