//! A single walk visiting many targets.

use super::{greedy_dominating, normalize_targets, window_end};
use crate::bounds::{lg, BoundFormulas};
use crate::error::StrategyError;
use crate::graph::{average_degree, Temporal, Time, Vertex};
use crate::reach::{earliest_arrival, extract_walk};
use crate::walk::TemporalWalk;

#[derive(Clone, Debug)]
pub struct LongWalk {
    pub walk: TemporalWalk,
    /// Targets on the walk, sorted.
    pub covered: Vec<Vertex>,
    /// Targets picked up by the dominating-set chain alone.
    pub chain_len: usize,
    pub epoch_len: usize,
    pub window: (Time, Time),
}

fn delta_f64<G: Temporal + ?Sized>(g: &G) -> f64 {
    let d = average_degree(g);
    (*d.numer() as f64 / *d.denom() as f64).max(1.0)
}

/// Builds a walk inside `t0..=t1` that starts and ends at targets.
///
/// Splits the window into epochs of `ceil(16n/q)` snapshots with
/// `q = floor(sqrt(|x| / (Δ log2 |x|)))`, peels one greedy dominating set off
/// the remaining targets per epoch, and chains back from the last set: each
/// member of set `i + 1` is reached in epoch `i` by some member of set `i`.
/// Leftover snapshots then extend the walk greedily to the nearest unvisited
/// target.
pub fn long_walk_in<G: Temporal + ?Sized>(g: &G, x: &[Vertex], t0: Time, t1: Time) -> LongWalk {
    let x = normalize_targets(g.vertex_count(), x).expect("targets in range");
    assert!(!x.is_empty(), "long walk needs a target");
    let n = g.vertex_count();
    let len = t1 + 1 - t0;
    let xf = x.len() as f64;
    let q = ((xf / (delta_f64(g) * lg(xf).max(1.0))).sqrt().floor() as usize).max(1);
    let period = (16 * n).div_ceil(q).max(1);
    let epochs = (len / period).max(1);
    let epoch_len = len / epochs;
    let bounds = |i: usize| {
        let s = t0 + i * epoch_len;
        let e = if i + 1 == epochs { t1 } else { s + epoch_len - 1 };
        (s, e)
    };

    let mut remaining = x.clone();
    let mut sets = Vec::new();
    for i in 0..epochs {
        if remaining.is_empty() {
            break;
        }
        let (s, e) = bounds(i);
        let d = greedy_dominating(g, &remaining, s, e);
        remaining.retain(|v| d.subset.binary_search(v).is_err());
        sets.push(d);
    }

    // chain back from the last set
    let mut at = sets.last().unwrap().subset[0];
    let mut pieces = Vec::new();
    for d in sets.iter().rev().skip(1) {
        let i = d.dominator_of(at).expect("later sets are dominated by earlier ones");
        pieces.push(extract_walk(g, &d.witness[i], at).unwrap());
        at = d.subset[i];
    }
    let mut walk = TemporalWalk::new(at);
    for p in pieces.iter().rev() {
        walk.append(p);
    }
    let chain_len = sets.len();

    let mut on_walk = vec![false; n];
    for v in walk.visits() {
        on_walk[v as usize] = true;
    }
    loop {
        let from = walk.last_time().map_or(t0, |t| t + 1);
        if from > t1 || x.iter().all(|&v| on_walk[v as usize]) {
            break;
        }
        let table = earliest_arrival(g, walk.end(), from, t1);
        let next = x
            .iter()
            .filter(|&&v| !on_walk[v as usize])
            .filter_map(|&v| table.time(v).map(|t| (t, v)))
            .min();
        let Some((_, v)) = next else { break };
        let piece = extract_walk(g, &table, v).unwrap();
        for u in piece.visits() {
            on_walk[u as usize] = true;
        }
        walk.append(&piece);
    }

    let covered = x.into_iter().filter(|&v| on_walk[v as usize]).collect();
    LongWalk {
        walk,
        covered,
        chain_len,
        epoch_len,
        window: (t0, t1),
    }
}

/// Long walk over the `mn` snapshots starting at `t0`, checked against the
/// coverage bound `sqrt(|x| / (Δ log2 |x|)) / 16`.
pub fn long_walk<G: Temporal + ?Sized>(g: &G, m: usize, x: &[Vertex], t0: Time) -> Result<LongWalk, StrategyError> {
    let xs = normalize_targets(g.vertex_count(), x)?;
    if xs.is_empty() {
        return Err(StrategyError::Precondition("empty target set".into()));
    }
    let len = m.max(1) * g.vertex_count();
    let t1 = window_end(g, t0, len)
        .ok_or_else(|| StrategyError::Precondition(format!("window of {len} snapshots from {t0} exceeds lifetime")))?;
    let lw = long_walk_in(g, &xs, t0, t1);
    let bound = BoundFormulas::<f64>::long_walk_coverage(delta_f64(g), xs.len())
        .ceil()
        .min(xs.len() as f64) as usize;
    if lw.covered.len() < bound {
        return Err(StrategyError::BoundViolated {
            what: "long walk coverage",
            got: lw.covered.len(),
            bound,
        });
    }
    Ok(lw)
}
