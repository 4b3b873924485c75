//! Temporally connected pairs inside a target set.

use super::normalize_targets;
use crate::error::StrategyError;
use crate::graph::{Temporal, Time, Vertex};
use crate::reach::{earliest_arrival, extract_walk};
use crate::walk::TemporalWalk;

/// A walk from `from` to `to`, both in the searched set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectedPair {
    pub from: Vertex,
    pub to: Vertex,
    pub walk: TemporalWalk,
}

/// Finds distinct `v, u` in `x` with a temporal walk `v -> u` inside
/// `t0..=t1`: the pair whose arrival is earliest, ties broken by `(v, u)`.
///
/// A pair is guaranteed when `|x| >= m + 1` and the window holds at least
/// [`super::pair_horizon`] snapshots of an always S-connected graph; the
/// search itself runs regardless.
pub fn find_connected_pair<G: Temporal + ?Sized>(
    g: &G,
    x: &[Vertex],
    t0: Time,
    t1: Time,
) -> Result<ConnectedPair, StrategyError> {
    let x = normalize_targets(g.vertex_count(), x)?;
    let mut best: Option<(Time, Vertex, Vertex, TemporalWalk)> = None;
    for &v in &x {
        let table = earliest_arrival(g, v, t0, t1);
        for &u in &x {
            if u == v {
                continue;
            }
            let Some(t) = table.time(u) else { continue };
            if best.as_ref().is_none_or(|b| t < b.0) {
                let walk = extract_walk(g, &table, u)?;
                best = Some((t, v, u, walk));
            }
        }
    }
    best.map(|(_, from, to, walk)| ConnectedPair { from, to, walk })
        .ok_or(StrategyError::NoPair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{StaticGraph, TemporalGraph};
    use crate::walk::verify_walk;

    #[test]
    fn earliest_pair_wins() {
        // 0-1 at 2, 2-3 at 1
        let a = StaticGraph::new(4, [(2, 3)]).unwrap();
        let b = StaticGraph::new(4, [(0, 1)]).unwrap();
        let g = TemporalGraph::from_snapshots(4, vec![a, b]).unwrap();
        let p = find_connected_pair(&g, &[0, 1, 2, 3], 1, 2).unwrap();
        assert_eq!((p.from, p.to), (2, 3));
        assert!(verify_walk(&g, &p.walk).is_ok());
    }

    #[test]
    fn no_pair() {
        let a = StaticGraph::new(4, [(2, 3)]).unwrap();
        let g = TemporalGraph::from_snapshots(4, vec![a]).unwrap();
        assert!(matches!(
            find_connected_pair(&g, &[0, 1, 2], 1, 1),
            Err(StrategyError::NoPair)
        ));
    }
}
