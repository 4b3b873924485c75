//! Converting multi-agent schedules into one agent's walk.

use crate::error::StrategyError;
use crate::graph::{Temporal, Time, Vertex};
use crate::reach::{arrival_at, walk_through_snapshots};
use crate::walk::{ExplorationSchedule, TemporalWalk};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConversionRound {
    pub start: Time,
    /// Snapshots the multi-agent schedule spanned, from its first available
    /// snapshot to its makespan.
    pub runner_span: usize,
    pub agents: usize,
    pub chosen: usize,
    pub residue_before: usize,
    pub gained: usize,
}

#[derive(Clone, Debug)]
pub struct SingleRun {
    pub schedule: ExplorationSchedule,
    pub rounds: Vec<ConversionRound>,
}

impl SingleRun {
    /// Longest multi-agent span over all rounds.
    pub fn max_runner_span(&self) -> usize {
        self.rounds.iter().map(|r| r.runner_span).max().unwrap_or(0)
    }

    pub fn agents(&self) -> usize {
        self.rounds.iter().map(|r| r.agents).max().unwrap_or(1)
    }
}

/// Explores every vertex with one agent starting at `start`.
///
/// Each round asks `runner(residue, t)` for a multi-agent schedule of the
/// unexplored vertices using snapshots from `t` on, where `t` leaves `n`
/// snapshots for the lone agent to reach the start of the walk covering the
/// most residue. That walk is then replayed unchanged.
pub fn multi_to_single<G, F>(g: &G, start: Vertex, mut runner: F) -> Result<SingleRun, StrategyError>
where
    G: Temporal + ?Sized,
    F: FnMut(&[Vertex], Time) -> Result<ExplorationSchedule, StrategyError>,
{
    let n = g.vertex_count();
    let all: Vec<Vertex> = (0..n as Vertex).collect();
    let mut covered = vec![false; n];
    covered[start as usize] = true;
    let mut walk = TemporalWalk::new(start);
    let mut rounds = Vec::new();
    let mut tau: Time = 1;
    let exhausted = |walk: &TemporalWalk, covered: &[bool], rounds: usize| StrategyError::LifetimeExhausted {
        partial: Box::new(ExplorationSchedule::new(vec![walk.clone()], all.clone())),
        uncovered: (0..n as Vertex).filter(|&v| !covered[v as usize]).collect(),
        epochs_completed: rounds,
    };
    loop {
        let residue: Vec<Vertex> = (0..n as Vertex).filter(|&v| !covered[v as usize]).collect();
        if residue.is_empty() {
            break;
        }
        let run_from = tau + n;
        if run_from > g.lifetime() {
            return Err(exhausted(&walk, &covered, rounds.len()));
        }
        let multi = match runner(&residue, run_from) {
            Ok(s) => s,
            Err(StrategyError::LifetimeExhausted { partial, .. }) => *partial,
            Err(e) => return Err(e),
        };
        let gain = |w: &TemporalWalk| {
            let mut seen: Vec<Vertex> = w.visits().filter(|&v| !covered[v as usize]).collect();
            seen.sort_unstable();
            seen.dedup();
            seen.len()
        };
        let Some((chosen, best)) = multi
            .walks
            .iter()
            .enumerate()
            .map(|(i, w)| (i, gain(w)))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        else {
            return Err(StrategyError::Precondition("runner returned no walks".into()));
        };
        if best == 0 {
            return Err(exhausted(&walk, &covered, rounds.len()));
        }
        let target = &multi.walks[chosen];
        let here = walk.end();
        let slots: Vec<Time> = (tau..run_from).collect();
        let latest = target.first_time().map_or(g.lifetime(), |t| t - 1);
        let relocate = walk_through_snapshots(g, here, target.start(), &slots)
            .ok()
            .or_else(|| arrival_at(g, here, target.start(), tau, latest));
        let Some(relocate) = relocate else {
            return Err(exhausted(&walk, &covered, rounds.len()));
        };
        let mut gained = 0;
        for piece in [&relocate, target] {
            for v in piece.visits() {
                if !covered[v as usize] {
                    covered[v as usize] = true;
                    gained += 1;
                }
            }
            walk.append(piece);
        }
        let makespan = multi.makespan().max(run_from - 1);
        rounds.push(ConversionRound {
            start: tau,
            runner_span: makespan + 1 - run_from,
            agents: multi.walks.len(),
            chosen,
            residue_before: residue.len(),
            gained,
        });
        tau = walk.last_time().map_or(run_from, |t| t + 1).max(run_from);
    }
    Ok(SingleRun {
        schedule: ExplorationSchedule::new(vec![walk], all),
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::SnapshotPolicy;
    use crate::graph::{AnchorSet, StaticGraph, TemporalGraph};
    use crate::strategies::there_and_back;
    use crate::walk::verify_schedule;

    #[test]
    fn one_vertex_is_trivial() {
        let g = TemporalGraph::oracle(StaticGraph::empty(1), SnapshotPolicy::Static, 0, 5).unwrap();
        let run = multi_to_single(&g, 0, |_, _| unreachable!()).unwrap();
        assert!(run.schedule.walks[0].is_empty());
        assert!(run.rounds.is_empty());
    }

    #[test]
    fn single_agent_single_round() {
        let s = StaticGraph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let g = TemporalGraph::oracle(s, SnapshotPolicy::Static, 0, 200).unwrap();
        let anchors = AnchorSet::single(2);
        let run = multi_to_single(&g, 0, |x, t| Ok(there_and_back(&g, &anchors, x, t)?.schedule)).unwrap();
        assert!(verify_schedule(&g, &run.schedule).is_valid());
        assert_eq!(run.rounds.len(), 1);
    }
}
