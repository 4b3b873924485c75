//! Exploration driven by an `(r, b)`-division.

use super::{multi_to_single, RBDivision, SingleRun};
use crate::bounds::BoundFormulas;
use crate::error::{DivisionError, StrategyError};
use crate::graph::{first_s_violation, AnchorSet, InducedView, Temporal, Time, Vertex};
use crate::reach::arrival_at;
use crate::strategies::{explore_subset_from, round_trips, there_and_back, RoundTrip, Team};
use crate::walk::{ExplorationSchedule, TemporalWalk};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RbConfig {
    /// Sub-exploration windows are this multiple of the subset bound.
    pub safety_multiplier: usize,
}

impl Default for RbConfig {
    fn default() -> Self {
        RbConfig { safety_multiplier: 4 }
    }
}

/// One component's sub-exploration. Between `start` and `end` agents only
/// move inside `vertices` (the component plus its boundary).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RbPhase {
    pub component: usize,
    pub vertices: Vec<Vertex>,
    pub start: Time,
    pub end: Time,
    /// Snapshots spent moving agents onto the boundary.
    pub relocation: usize,
    /// Round trips replaced (part of) the subset explorer.
    pub fallback: bool,
}

#[derive(Clone, Debug)]
pub struct RbRun {
    pub schedule: ExplorationSchedule,
    pub phases: Vec<RbPhase>,
    /// Round trips of the final sweep over leftovers.
    pub sweep: Vec<RoundTrip>,
    pub diagnostics: Vec<String>,
}

/// Explores every vertex from snapshot 1.
pub fn explore_rb<G: Temporal + ?Sized>(g: &G, div: &RBDivision, cfg: RbConfig) -> Result<RbRun, StrategyError> {
    let all: Vec<Vertex> = (0..g.vertex_count() as Vertex).collect();
    explore_rb_from(g, div, &all, 1, cfg)
}

fn delta(edges: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        (2 * edges) as f64 / n as f64
    }
}

/// Agents (one per boundary vertex of the largest boundary) visit the
/// components holding targets in decreasing size order. Each visit moves the
/// agents onto the component's boundary, then explores the component inside
/// the component-plus-boundary subgraph. Leftovers are fetched by round trips
/// over the whole graph.
pub fn explore_rb_from<G: Temporal + ?Sized>(
    g: &G,
    div: &RBDivision,
    targets: &[Vertex],
    t0: Time,
    cfg: RbConfig,
) -> Result<RbRun, StrategyError> {
    let n = g.vertex_count();
    if let Some(i) = div.components.iter().position(|c| c.boundary.is_empty()) {
        return Err(DivisionError::EmptyBoundary(i).into());
    }
    let mut wanted = vec![false; n];
    for &v in targets {
        wanted[v as usize] = true;
    }
    let mut order: Vec<usize> = (0..div.components.len())
        .filter(|&i| div.components[i].vertices.iter().any(|&v| wanted[v as usize]))
        .collect();
    order.sort_by_key(|&i| std::cmp::Reverse(div.components[i].vertices.len()));

    let agents = div.max_boundary().max(1);
    let first = order.first().map(|&i| &div.components[i].boundary);
    let mut starts: Vec<Vertex> = first.cloned().unwrap_or_else(|| vec![0]);
    let mut fill = 0;
    while starts.len() < agents {
        if !starts.contains(&fill) {
            starts.push(fill);
        }
        fill += 1;
    }
    let mut walks: Vec<TemporalWalk> = starts.iter().map(|&v| TemporalWalk::new(v)).collect();
    let mut phases = Vec::new();
    let mut diagnostics = Vec::new();
    let mut tau = t0.max(1);
    let lifetime = g.lifetime();
    let exhausted = |walks: &[TemporalWalk], uncovered: Vec<Vertex>, done: usize| StrategyError::LifetimeExhausted {
        partial: Box::new(ExplorationSchedule::new(walks.to_vec(), targets.to_vec())),
        uncovered,
        epochs_completed: done,
    };

    for &ci in &order {
        let comp = &div.components[ci];
        let boundary = &comp.boundary;
        // agent for each boundary vertex; agents already there stay
        let mut assigned: Vec<Option<usize>> = vec![None; boundary.len()];
        let mut busy = vec![false; agents];
        for (j, &b) in boundary.iter().enumerate() {
            if let Some(a) = (0..agents).find(|&a| !busy[a] && walks[a].end() == b) {
                assigned[j] = Some(a);
                busy[a] = true;
            }
        }
        for slot in assigned.iter_mut().filter(|s| s.is_none()) {
            let a = (0..agents)
                .find(|&a| !busy[a])
                .expect("enough agents for every boundary");
            *slot = Some(a);
            busy[a] = true;
        }
        let assigned: Vec<usize> = assigned.into_iter().map(Option::unwrap).collect();
        let mut start = tau;
        for (j, &a) in assigned.iter().enumerate() {
            let (from, to) = (walks[a].end(), boundary[j]);
            if from == to {
                continue;
            }
            if tau > lifetime {
                return Err(exhausted(&walks, uncovered_of(&walks, targets, n), phases.len()));
            }
            let quick = arrival_at(g, from, to, tau, (tau + n - 1).min(lifetime));
            let Some(w) = quick.or_else(|| arrival_at(g, from, to, tau, lifetime)) else {
                return Err(DivisionError::Relocation {
                    agent: a,
                    component: ci,
                }
                .into());
            };
            start = start.max(w.last_time().unwrap() + 1);
            walks[a].append(&w);
        }
        let relocation = start - tau;

        let mut region: Vec<Vertex> = comp.vertices.iter().chain(boundary).copied().collect();
        region.sort_unstable();
        let full = InducedView::new(g, region.clone());
        let local = |v: Vertex| full.local(v).unwrap();
        let anchors = AnchorSet::new(boundary.iter().map(|&b| local(b)).collect()).expect("boundary is duplicate-free");
        let covered_now = covered_set(&walks, n);
        let x: Vec<Vertex> = comp
            .vertices
            .iter()
            .copied()
            .filter(|&v| wanted[v as usize] && !covered_now[v as usize])
            .map(local)
            .collect();
        let nv = region.len();
        let bound = BoundFormulas::<f64>::explore_subset(
            nv,
            boundary.len(),
            delta(full.underlying().edge_count(), nv),
            x.len(),
        );
        let budget = (cfg.safety_multiplier.max(1) as f64 * bound).ceil() as usize;
        let cap = start.saturating_add(budget).saturating_sub(1).min(lifetime);
        let mut fallback = false;
        if start > lifetime {
            return Err(exhausted(&walks, uncovered_of(&walks, targets, n), phases.len()));
        }

        let mut sub: Vec<TemporalWalk> = anchors.vertices().iter().map(|&v| TemporalWalk::new(v)).collect();
        let view = InducedView::new(g, region.clone()).capped(cap.max(start));
        match explore_subset_from(&view, &anchors, &x, start) {
            Ok(run) => sub = run.schedule.walks,
            Err(StrategyError::LifetimeExhausted { partial, .. }) => {
                diagnostics.push(format!("component {ci}: subset explorer exhausted its window"));
                sub = partial.walks;
            }
            Err(e) => diagnostics.push(format!("component {ci}: subset explorer failed: {e}")),
        }
        // Only the snapshots the explorer consumed are checked; a full scan
        // of a budget-sized window dominates the run time.
        let used = sub
            .iter()
            .filter_map(TemporalWalk::last_time)
            .max()
            .unwrap_or(start)
            .max(start);
        if let Ok(Some((t, v))) = first_s_violation(&view, &anchors, start..=used.min(view.lifetime())) {
            diagnostics.push(format!(
                "component {ci}: not S-connected at snapshot {t} (local vertex {v})"
            ));
        }
        let on_sub = covered_set(&sub, nv);
        let leftover: Vec<Vertex> = x.iter().copied().filter(|&v| !on_sub[v as usize]).collect();
        if !leftover.is_empty() {
            fallback = true;
            let from = sub
                .iter()
                .filter_map(TemporalWalk::last_time)
                .max()
                .map_or(start, |t| t + 1);
            let span = cfg.safety_multiplier.max(1) * 2 * nv * boundary.len() * leftover.len();
            let fb_cap = from.saturating_add(span).saturating_sub(1).min(lifetime);
            if from <= fb_cap {
                let fb_view = InducedView::new(g, region.clone()).capped(fb_cap);
                let fb = match there_and_back(&fb_view, &anchors, &leftover, from) {
                    Ok(run) => Some(run.schedule),
                    Err(StrategyError::LifetimeExhausted { partial, uncovered, .. }) => {
                        diagnostics.push(format!(
                            "component {ci}: {} vertices left to the sweep",
                            uncovered.len()
                        ));
                        Some(*partial)
                    }
                    Err(e) => {
                        diagnostics.push(format!("component {ci}: round trips failed: {e}"));
                        None
                    }
                };
                if let Some(fb) = fb {
                    for (w, extra) in sub.iter_mut().zip(&fb.walks) {
                        w.append(extra);
                    }
                }
            }
        }
        let mut end = start.saturating_sub(1);
        for (j, w) in sub.iter().enumerate() {
            let global = w.map_vertices(|v| full.global(v));
            end = end.max(global.last_time().unwrap_or(0));
            walks[assigned[j]].append(&global);
        }
        phases.push(RbPhase {
            component: ci,
            vertices: region,
            start,
            end,
            relocation,
            fallback,
        });
        tau = end + 1;
    }

    let mut team = Team::from_walks(n, walks);
    let leftover = uncovered_of(&team.walks, targets, n);
    match round_trips(g, &mut team, &leftover, tau) {
        Ok((sweep, _)) => Ok(RbRun {
            schedule: team.schedule(targets),
            phases,
            sweep,
            diagnostics,
        }),
        Err(uncovered) => Err(exhausted(&team.walks, uncovered, phases.len())),
    }
}

fn covered_set(walks: &[TemporalWalk], n: usize) -> Vec<bool> {
    let mut c = vec![false; n];
    for v in walks.iter().flat_map(TemporalWalk::visits) {
        c[v as usize] = true;
    }
    c
}

fn uncovered_of(walks: &[TemporalWalk], targets: &[Vertex], n: usize) -> Vec<Vertex> {
    let c = covered_set(walks, n);
    let mut out: Vec<Vertex> = targets.iter().copied().filter(|&v| !c[v as usize]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// One agent, starting on the first boundary vertex of the largest
/// component, repeatedly replays the best walk of [`explore_rb_from`].
pub fn explore_rb_single<G: Temporal + ?Sized>(
    g: &G,
    div: &RBDivision,
    cfg: RbConfig,
) -> Result<SingleRun, StrategyError> {
    let start = div
        .components
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.vertices.len().cmp(&b.1.vertices.len()).then(b.0.cmp(&a.0)))
        .and_then(|(_, c)| c.boundary.first().copied())
        .unwrap_or(0);
    multi_to_single(g, start, |residue, t| {
        explore_rb_from(g, div, residue, t, cfg).map(|r| r.schedule)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_grid, SnapshotPolicy};
    use crate::graph::TemporalGraph;
    use crate::reductions::grid_division;
    use crate::walk::verify_schedule;

    #[test]
    fn static_grid_strips() {
        let g = TemporalGraph::oracle(gen_grid(2, 7), SnapshotPolicy::Static, 0, 100_000).unwrap();
        let div = grid_division(2, 7, 2);
        let run = explore_rb(&g, &div, RbConfig::default()).unwrap();
        assert!(verify_schedule(&g, &run.schedule).is_valid());
        assert_eq!(run.phases.len(), div.components.len());
        for p in &run.phases {
            for w in &run.schedule.walks {
                for s in w.steps().iter().filter(|s| (p.start..=p.end).contains(&s.time)) {
                    assert!(p.vertices.contains(&s.from) && p.vertices.contains(&s.to));
                }
            }
        }
    }

    #[test]
    fn empty_boundary_rejected() {
        let g = TemporalGraph::oracle(gen_grid(2, 1), SnapshotPolicy::Static, 0, 10).unwrap();
        let div = grid_division(2, 1, 1);
        assert!(matches!(
            explore_rb(&g, &div, RbConfig::default()),
            Err(StrategyError::Division(DivisionError::EmptyBoundary(0)))
        ));
    }
}
