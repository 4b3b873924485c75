//! Multi-agent exploration of a target set in epochs.

use super::{
    check_anchors, cleanup_threshold, epoch_length, long_walk_in, normalize_targets, round_trips, split_in, RoundTrip,
    Team,
};
use crate::error::StrategyError;
use crate::graph::{AnchorSet, Temporal, Time, Vertex};
use crate::reach::arrival_at;
use crate::walk::ExplorationSchedule;

/// One epoch: all agents start and end it on their anchors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpochRecord {
    pub start: Time,
    pub end: Time,
    /// Uncovered targets when the epoch began.
    pub residue: usize,
    /// Agent that moved, if any.
    pub agent: Option<usize>,
    pub split_block: usize,
    pub split_size: usize,
    /// Previously uncovered targets visited in this epoch.
    pub covered: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpochPlan {
    pub epoch_len: usize,
    pub epochs: Vec<EpochRecord>,
    /// First snapshot of the round-trip phase.
    pub cleanup_start: Time,
}

#[derive(Clone, Debug)]
pub struct ExploreRun {
    pub schedule: ExplorationSchedule,
    pub plan: EpochPlan,
    pub cleanup: Vec<RoundTrip>,
}

/// [`explore_subset_from`] starting at snapshot 1.
pub fn explore_subset<G: Temporal + ?Sized>(g: &G, s: &AnchorSet, x: &[Vertex]) -> Result<ExploreRun, StrategyError> {
    explore_subset_from(g, s, x, 1)
}

/// Explores every vertex.
pub fn explore_all<G: Temporal + ?Sized>(g: &G, s: &AnchorSet) -> Result<ExploreRun, StrategyError> {
    let all: Vec<Vertex> = (0..g.vertex_count() as Vertex).collect();
    explore_subset(g, s, &all)
}

/// Explores `x` with one agent per anchor, starting at `t0`.
///
/// While more than `2m^2` targets remain, each epoch of `P` snapshots sends a
/// single agent out: it walks to a go-and-return subset during the blocks
/// before the split block, follows a long walk over that subset inside it,
/// and returns home in the blocks after. The remaining targets are fetched by
/// round trips.
pub fn explore_subset_from<G: Temporal + ?Sized>(
    g: &G,
    s: &AnchorSet,
    x: &[Vertex],
    t0: Time,
) -> Result<ExploreRun, StrategyError> {
    check_anchors(g, s)?;
    let targets = normalize_targets(g.vertex_count(), x)?;
    let m = s.len();
    let mut team = Team::new(g.vertex_count(), s.vertices());
    let mut residue: Vec<Vertex> = targets.iter().copied().filter(|&v| !team.is_covered(v)).collect();
    let epoch_len = epoch_length(g, m);
    let mut epochs = Vec::new();
    let mut tau = t0.max(1);

    while residue.len() > cleanup_threshold(m) {
        if tau + epoch_len - 1 > g.lifetime() {
            return Err(StrategyError::LifetimeExhausted {
                partial: Box::new(team.schedule(&targets)),
                uncovered: residue,
                epochs_completed: epochs.len(),
            });
        }
        let split = split_in(g, s, &residue, tau, epoch_len)?;
        let end = split.end();
        let mut rec = EpochRecord {
            start: tau,
            end,
            residue: residue.len(),
            agent: None,
            split_block: split.block,
            split_size: split.subset.len(),
            covered: Vec::new(),
        };
        if !split.subset.is_empty() {
            let (ws, we) = split.walk_window();
            let lw = long_walk_in(g, &split.subset, ws, we);
            let (gs, ge) = split.go_window();
            let (rs, re) = split.return_window();
            let go = arrival_at(g, split.anchor, lw.walk.start(), gs, ge);
            let back = arrival_at(g, lw.walk.end(), split.anchor, rs, re);
            if let (Some(go), Some(back)) = (go, back) {
                team.extend(split.agent, &go);
                team.extend(split.agent, &lw.walk);
                team.extend(split.agent, &back);
                rec.agent = Some(split.agent);
            }
        }
        residue.retain(|&v| {
            let hit = team.is_covered(v);
            if hit {
                rec.covered.push(v);
            }
            !hit
        });
        epochs.push(rec);
        tau = end + 1;
    }

    let cleanup_start = tau;
    match round_trips(g, &mut team, &residue, tau) {
        Ok((cleanup, _)) => Ok(ExploreRun {
            schedule: team.schedule(&targets),
            plan: EpochPlan {
                epoch_len,
                epochs,
                cleanup_start,
            },
            cleanup,
        }),
        Err(uncovered) => Err(StrategyError::LifetimeExhausted {
            partial: Box::new(team.schedule(&targets)),
            uncovered,
            epochs_completed: epochs.len(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::SnapshotPolicy;
    use crate::graph::{StaticGraph, TemporalGraph};
    use crate::walk::verify_schedule;

    #[test]
    fn static_cycle_explored() {
        let n = 12u32;
        let edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let s = StaticGraph::new(n as usize, edges).unwrap();
        let g = TemporalGraph::oracle(s, SnapshotPolicy::Static, 0, 2000).unwrap();
        let anchors = AnchorSet::single(0);
        let run = explore_all(&g, &anchors).unwrap();
        assert!(verify_schedule(&g, &run.schedule).is_valid());
        assert!(!run.plan.epochs.is_empty());
        for e in &run.plan.epochs {
            assert_eq!(run.schedule.walks[0].position_at(e.end), 0);
        }
    }

    #[test]
    fn anchors_cover_target() {
        let s = StaticGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        let g = TemporalGraph::explicit(s.clone(), vec![s], false).unwrap();
        let run = explore_subset(&g, &AnchorSet::new(vec![0, 2]).unwrap(), &[2, 0]).unwrap();
        assert_eq!(run.schedule.makespan(), 0);
    }
}
