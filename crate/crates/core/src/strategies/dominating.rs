//! Small subsets that temporally dominate a target set.

use fixedbitset::FixedBitSet;

use super::{dominating_horizon, normalize_targets};
use crate::bounds::BoundFormulas;
use crate::error::StrategyError;
use crate::graph::{AnchorSet, Temporal, Time, Vertex};
use crate::reach::{earliest_arrival, ArrivalTable};

/// `subset` dominates the target set in the window: every other target is
/// reached from some member. `witness[i]` is the arrival table of
/// `subset[i]`.
#[derive(Clone, Debug)]
pub struct Dominating {
    pub subset: Vec<Vertex>,
    pub witness: Vec<ArrivalTable>,
    pub window: (Time, Time),
}

impl Dominating {
    /// Member of the subset reaching `u`, smallest id first.
    pub fn dominator_of(&self, u: Vertex) -> Option<usize> {
        self.witness.iter().position(|t| t.reached(u))
    }
}

/// Greedy construction without size guarantees.
///
/// Rounds over the undominated set: pick `v` with `|F(v)| >= |B(v)|` and
/// `|F(v)|` largest (smallest id on ties), where `F`/`B` are the targets
/// still in play that `v` reaches or that reach `v`. Then drop `v`, `F(v)`
/// and `B(v)` from play.
pub(crate) fn greedy_dominating<G: Temporal + ?Sized>(g: &G, x: &[Vertex], t0: Time, t1: Time) -> Dominating {
    let k = x.len();
    let tables: Vec<ArrivalTable> = x.iter().map(|&v| earliest_arrival(g, v, t0, t1)).collect();
    let mut fwd = vec![FixedBitSet::with_capacity(k); k];
    let mut bwd = vec![FixedBitSet::with_capacity(k); k];
    for (i, table) in tables.iter().enumerate() {
        for (j, &u) in x.iter().enumerate() {
            if i != j && table.reached(u) {
                fwd[i].insert(j);
                bwd[j].insert(i);
            }
        }
    }
    let mut undominated = FixedBitSet::with_capacity(k);
    undominated.insert_range(..);
    let mut chosen = Vec::new();
    while !undominated.is_clear() {
        let mut play = undominated.clone();
        while !play.is_clear() {
            let mut pick: Option<(usize, usize)> = None;
            for i in play.ones() {
                let f = fwd[i].intersection(&play).count();
                let b = bwd[i].intersection(&play).count();
                if f >= b && pick.is_none_or(|(_, bf)| f > bf) {
                    pick = Some((i, f));
                }
            }
            let (i, _) = pick.expect("some vertex has out-degree at least its in-degree");
            let mut gone = fwd[i].clone();
            gone.intersect_with(&play);
            gone.insert(i);
            undominated.difference_with(&gone);
            gone.union_with(&bwd[i]);
            play.difference_with(&gone);
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    Dominating {
        subset: chosen.iter().map(|&i| x[i]).collect(),
        witness: chosen.into_iter().map(|i| tables[i].clone()).collect(),
        window: (t0, t1),
    }
}

/// Dominating subset of size at most `2k log2 |x|` in `t0..=t1`.
///
/// Requires `|x| >= 2m + 2` (so every subset of at least half of `x` holds a
/// temporally connected pair) and a window of at least `2Δn/k + 1`
/// snapshots.
pub fn dominating_subset<G: Temporal + ?Sized>(
    g: &G,
    s: &AnchorSet,
    x: &[Vertex],
    k: usize,
    t0: Time,
    t1: Time,
) -> Result<Dominating, StrategyError> {
    let x = normalize_targets(g.vertex_count(), x)?;
    let m = s.len();
    if k == 0 {
        return Err(StrategyError::Precondition("k must be positive".into()));
    }
    if x.len() < 2 * m + 2 {
        return Err(StrategyError::Precondition(format!(
            "|X| = {} below 2m + 2 = {}",
            x.len(),
            2 * m + 2
        )));
    }
    let need = dominating_horizon(g, k);
    if t1 + 1 < t0 + need {
        return Err(StrategyError::Precondition(format!(
            "window of {} snapshots, need {need}",
            (t1 + 1).saturating_sub(t0)
        )));
    }
    let d = greedy_dominating(g, &x, t0, t1);
    let bound = BoundFormulas::<f64>::dominating_size(k, x.len());
    if d.subset.len() as f64 > bound {
        return Err(StrategyError::BoundViolated {
            what: "dominating subset size",
            got: d.subset.len(),
            bound: bound.floor() as usize,
        });
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{StaticGraph, TemporalGraph};

    #[test]
    fn star_centre_dominates() {
        // centre 0 joined to 1..5 in every snapshot
        let s = StaticGraph::new(6, (1..6).map(|i| (0, i))).unwrap();
        let g = TemporalGraph::explicit(s.clone(), vec![s; 3], false).unwrap();
        let d = greedy_dominating(&g, &[0, 1, 2, 3, 4, 5], 1, 1);
        assert_eq!(d.subset, vec![0]);
    }

    #[test]
    fn every_target_dominated() {
        let s1 = StaticGraph::new(6, [(0, 1), (2, 3)]).unwrap();
        let s2 = StaticGraph::new(6, [(1, 2), (4, 5)]).unwrap();
        let g = TemporalGraph::from_snapshots(6, vec![s1, s2]).unwrap();
        let x = [0, 1, 2, 3, 4, 5];
        let d = greedy_dominating(&g, &x, 1, 2);
        for &u in &x {
            assert!(d.subset.contains(&u) || d.dominator_of(u).is_some(), "{u}");
        }
    }
}
