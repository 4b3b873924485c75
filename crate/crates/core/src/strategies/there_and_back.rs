//! Round trips: one agent at a time fetches a target and comes home.

use fixedbitset::FixedBitSet;

use super::{check_anchors, normalize_targets};
use crate::error::StrategyError;
use crate::graph::{AnchorSet, Temporal, Time, Vertex};
use crate::reach::arrival_at;
use crate::walk::{ExplorationSchedule, TemporalWalk};

/// One fetched target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundTrip {
    pub vertex: Vertex,
    pub agent: usize,
    /// First snapshot available to this trip.
    pub window_start: Time,
    /// Snapshot of the last step home (or of arrival, if the agent was home).
    pub completion: Time,
}

impl RoundTrip {
    pub fn snapshots_used(&self) -> usize {
        self.completion + 1 - self.window_start
    }
}

#[derive(Clone, Debug)]
pub struct CleanupRun {
    pub schedule: ExplorationSchedule,
    pub trips: Vec<RoundTrip>,
}

/// Agents with their walks so far and the vertices covered by them.
#[derive(Clone, Debug)]
pub(crate) struct Team {
    pub anchors: Vec<Vertex>,
    pub walks: Vec<TemporalWalk>,
    covered: FixedBitSet,
}

impl Team {
    pub fn new(n: usize, anchors: &[Vertex]) -> Self {
        let mut covered = FixedBitSet::with_capacity(n);
        for &a in anchors {
            covered.insert(a as usize);
        }
        Team {
            anchors: anchors.to_vec(),
            walks: anchors.iter().map(|&a| TemporalWalk::new(a)).collect(),
            covered,
        }
    }

    /// Agents parked at the ends of `walks`.
    pub fn from_walks(n: usize, walks: Vec<TemporalWalk>) -> Self {
        let mut covered = FixedBitSet::with_capacity(n);
        for v in walks.iter().flat_map(TemporalWalk::visits) {
            covered.insert(v as usize);
        }
        Team {
            anchors: walks.iter().map(TemporalWalk::end).collect(),
            walks,
            covered,
        }
    }

    pub fn extend(&mut self, agent: usize, w: &TemporalWalk) {
        for v in w.visits() {
            self.covered.insert(v as usize);
        }
        self.walks[agent].append(w);
    }

    pub fn is_covered(&self, v: Vertex) -> bool {
        self.covered.contains(v as usize)
    }

    pub fn schedule(&self, target: &[Vertex]) -> ExplorationSchedule {
        ExplorationSchedule::new(self.walks.clone(), target.to_vec())
    }
}

/// Fetches every uncovered vertex of `targets`, starting at `t0`, with all
/// agents at their anchors. Returns the trips and the first free snapshot, or
/// the still uncovered targets if the lifetime runs out.
pub(crate) fn round_trips<G: Temporal + ?Sized>(
    g: &G,
    team: &mut Team,
    targets: &[Vertex],
    t0: Time,
) -> Result<(Vec<RoundTrip>, Time), Vec<Vertex>> {
    let lifetime = g.lifetime();
    let base = (2 * g.vertex_count() * team.anchors.len()).max(1);
    let mut trips = Vec::new();
    let mut tau = t0;
    for (idx, &v) in targets.iter().enumerate() {
        if team.is_covered(v) {
            continue;
        }
        let mut best: Option<(Time, usize, TemporalWalk, TemporalWalk)> = None;
        // Within 2nm snapshots in S-connected graphs; widen otherwise.
        let mut span = base;
        while best.is_none() {
            if tau > lifetime {
                break;
            }
            let cap = tau.saturating_add(span - 1).min(lifetime);
            for (i, &a) in team.anchors.iter().enumerate() {
                let Some(go) = arrival_at(g, a, v, tau, cap) else {
                    continue;
                };
                let ret_from = go.last_time().map_or(tau, |t| t + 1);
                let Some(back) = arrival_at(g, v, a, ret_from, cap) else {
                    continue;
                };
                let done = back.last_time().or(go.last_time()).unwrap_or(tau);
                if best.as_ref().is_none_or(|b| done < b.0) {
                    best = Some((done, i, go, back));
                }
            }
            if cap == lifetime {
                break;
            }
            span = span.saturating_mul(2);
        }
        let Some((done, agent, go, back)) = best else {
            let rest = targets[idx..]
                .iter()
                .copied()
                .filter(|&u| !team.is_covered(u))
                .collect();
            return Err(rest);
        };
        team.extend(agent, &go);
        team.extend(agent, &back);
        trips.push(RoundTrip {
            vertex: v,
            agent,
            window_start: tau,
            completion: done,
        });
        tau = done + 1;
    }
    Ok((trips, tau))
}

/// Explores `x` with consecutive round trips from the anchors, starting at
/// snapshot `t0`. Each trip picks the agent that gets home first.
pub fn there_and_back<G: Temporal + ?Sized>(
    g: &G,
    s: &AnchorSet,
    x: &[Vertex],
    t0: Time,
) -> Result<CleanupRun, StrategyError> {
    check_anchors(g, s)?;
    let targets = normalize_targets(g.vertex_count(), x)?;
    let mut team = Team::new(g.vertex_count(), s.vertices());
    match round_trips(g, &mut team, &targets, t0.max(1)) {
        Ok((trips, _)) => Ok(CleanupRun {
            schedule: team.schedule(&targets),
            trips,
        }),
        Err(uncovered) => Err(StrategyError::LifetimeExhausted {
            partial: Box::new(team.schedule(&targets)),
            uncovered,
            epochs_completed: 0,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{StaticGraph, TemporalGraph};
    use crate::walk::verify_schedule;

    fn static_path(n: usize, t: usize) -> TemporalGraph {
        let edges: Vec<(u32, u32)> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        let s = StaticGraph::new(n, edges).unwrap();
        TemporalGraph::explicit(s.clone(), vec![s; t], false).unwrap()
    }

    #[test]
    fn far_end_of_static_path() {
        let g = static_path(5, 40);
        let run = there_and_back(&g, &AnchorSet::single(0), &[4], 1).unwrap();
        assert!(verify_schedule(&g, &run.schedule).is_valid());
        assert_eq!(run.schedule.walks[0].len(), 8);
        assert_eq!(run.schedule.makespan(), 8);
        assert!(run.trips[0].snapshots_used() <= 2 * 5);
    }

    #[test]
    fn anchors_only_is_idle() {
        let g = static_path(4, 3);
        let s = AnchorSet::new(vec![1, 3]).unwrap();
        let run = there_and_back(&g, &s, &[3, 1], 1).unwrap();
        assert_eq!(run.schedule.makespan(), 0);
        assert!(run.trips.is_empty());
    }

    #[test]
    fn exhaustion_reports_partial() {
        let g = static_path(5, 6);
        let err = there_and_back(&g, &AnchorSet::single(0), &[2, 4], 1).unwrap_err();
        match err {
            StrategyError::LifetimeExhausted { partial, uncovered, .. } => {
                assert_eq!(uncovered, vec![4]);
                assert!(partial.covered().contains(&2));
            }
            e => panic!("unexpected {e}"),
        }
    }
}
