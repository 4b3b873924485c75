//! Anchored exploration strategies.
//!
//! All strategies assume one agent parked on each anchor at the start time
//! and return agents to their anchors at well-defined boundaries, so they can
//! be chained.

mod dominating;
mod explore;
mod long_walk;
mod pair;
mod split;
mod there_and_back;

pub use dominating::{dominating_subset, Dominating};
pub use explore::{explore_all, explore_subset, explore_subset_from, EpochPlan, EpochRecord, ExploreRun};
pub use long_walk::{long_walk, long_walk_in, LongWalk};
pub use pair::{find_connected_pair, ConnectedPair};
pub use split::{split_go_and_return, split_in, GoReturnSplit};
pub use there_and_back::{there_and_back, CleanupRun, RoundTrip};

pub(crate) use dominating::greedy_dominating;
pub(crate) use there_and_back::{round_trips, Team};

use fixedbitset::FixedBitSet;

use crate::error::{GraphError, StrategyError};
use crate::graph::{AnchorSet, Temporal, Time, Vertex};

/// Sorted, deduplicated copy of a vertex list, range-checked.
pub(crate) fn normalize_targets(n: usize, x: &[Vertex]) -> Result<Vec<Vertex>, GraphError> {
    let mut out = x.to_vec();
    out.sort_unstable();
    out.dedup();
    if let Some(&v) = out.iter().find(|&&v| v as usize >= n) {
        return Err(GraphError::VertexOutOfRange { vertex: v, n });
    }
    Ok(out)
}

pub(crate) fn bitset_of(n: usize, vs: impl IntoIterator<Item = Vertex>) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(n);
    for v in vs {
        set.insert(v as usize);
    }
    set
}

fn div_ceil_u64(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// Window length `ceil(2Δn / (|X| - (m - 1))) + 1` with `2Δn = 4|E|`.
pub fn pair_horizon<G: Temporal + ?Sized>(g: &G, m: usize, x: usize) -> usize {
    let denom = x.saturating_sub(m.saturating_sub(1)).max(1) as u64;
    div_ceil_u64(4 * g.underlying().edge_count() as u64, denom) as usize + 1
}

/// Window length `ceil(2Δn / k) + 1` for the dominating-subset construction.
pub fn dominating_horizon<G: Temporal + ?Sized>(g: &G, k: usize) -> usize {
    div_ceil_u64(4 * g.underlying().edge_count() as u64, k.max(1) as u64) as usize + 1
}

/// Epoch length `P = 4Δ(2m + 1)mn = 8|E|(2m + 1)m`, at least one snapshot per
/// block.
pub fn epoch_length<G: Temporal + ?Sized>(g: &G, m: usize) -> usize {
    let blocks = 2 * m + 1;
    (8 * g.underlying().edge_count() * blocks * m).max(blocks)
}

/// Cleanup threshold `2m^2`: at or below it the explorer switches to round
/// trips.
pub fn cleanup_threshold(m: usize) -> usize {
    2 * m * m
}

pub(crate) fn check_anchors<G: Temporal + ?Sized>(g: &G, s: &AnchorSet) -> Result<(), StrategyError> {
    s.check_range(g.vertex_count())?;
    Ok(())
}

pub(crate) fn window_end<G: Temporal + ?Sized>(g: &G, t0: Time, len: usize) -> Option<Time> {
    let end = t0.checked_add(len)?.checked_sub(1)?;
    (t0 >= 1 && end <= g.lifetime()).then_some(end)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{StaticGraph, TemporalGraph};

    fn with_edges(n: usize, e: usize) -> TemporalGraph {
        let edges: Vec<(u32, u32)> = (0..e as u32).map(|i| (i, i + 1)).collect();
        let s = StaticGraph::new(n, edges).unwrap();
        TemporalGraph::explicit(s.clone(), vec![s], false).unwrap()
    }

    #[test]
    fn epoch_length_substitution() {
        // Δ = 2, n = 10 means |E| = 10; m = 2 gives 4·2·5·2·10
        let g = with_edges(11, 10);
        let g10 = {
            let mut edges: Vec<(u32, u32)> = (0..9).map(|i| (i, i + 1)).collect();
            edges.push((9, 0));
            let s = StaticGraph::new(10, edges).unwrap();
            TemporalGraph::explicit(s.clone(), vec![s], false).unwrap()
        };
        assert_eq!(epoch_length(&g10, 2), 800);
        assert_eq!(epoch_length(&g, 2), 800);
    }

    #[test]
    fn pair_horizon_substitution() {
        // Δ = 2, n = 10, |X| = 5, m = 1
        let mut edges: Vec<(u32, u32)> = (0..9).map(|i| (i, i + 1)).collect();
        edges.push((9, 0));
        let s = StaticGraph::new(10, edges).unwrap();
        let g = TemporalGraph::explicit(s.clone(), vec![s], false).unwrap();
        assert_eq!(pair_horizon(&g, 1, 5), 9);
    }
}
