//! Targets one anchor can reach early in a window and return from late.

use fixedbitset::FixedBitSet;

use super::{bitset_of, normalize_targets, window_end};
use crate::error::StrategyError;
use crate::graph::{AnchorSet, Temporal, Time, Vertex};
use crate::reach::{earliest_arrival, latest_departure};

/// The window is cut into `2m + 1` blocks numbered from 1. Agent `agent` can
/// reach each vertex of `subset` within one block before `block`, and return
/// from it to its anchor within one block after `block`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoReturnSplit {
    pub subset: Vec<Vertex>,
    pub agent: usize,
    pub anchor: Vertex,
    pub block: usize,
    pub block_len: usize,
    pub blocks: usize,
    pub start: Time,
    /// `ceil(|x| / 2m^2)`.
    pub threshold: usize,
}

impl GoReturnSplit {
    /// Snapshot range of block `b` (1-based).
    pub fn block_range(&self, b: usize) -> (Time, Time) {
        let s = self.start + (b - 1) * self.block_len;
        (s, s + self.block_len - 1)
    }

    /// Snapshots before the split block.
    pub fn go_window(&self) -> (Time, Time) {
        (self.start, self.block_range(self.block).0 - 1)
    }

    pub fn walk_window(&self) -> (Time, Time) {
        self.block_range(self.block)
    }

    /// Snapshots after the split block.
    pub fn return_window(&self) -> (Time, Time) {
        (self.block_range(self.block + 1).0, self.block_range(self.blocks).1)
    }

    pub fn end(&self) -> Time {
        self.block_range(self.blocks).1
    }

    pub fn meets_threshold(&self) -> bool {
        self.subset.len() >= self.threshold
    }
}

/// Scans `(block, agent)` pairs in lexicographic order over
/// `window_len` snapshots from `t0` and returns the first whose subset
/// reaches the threshold, or the largest one otherwise.
pub fn split_in<G: Temporal + ?Sized>(
    g: &G,
    s: &AnchorSet,
    x: &[Vertex],
    t0: Time,
    window_len: usize,
) -> Result<GoReturnSplit, StrategyError> {
    let n = g.vertex_count();
    let x = normalize_targets(n, x)?;
    let m = s.len();
    let blocks = 2 * m + 1;
    let block_len = (window_len / blocks).max(1);
    if window_end(g, t0, block_len * blocks).is_none() {
        return Err(StrategyError::Precondition(format!(
            "{} snapshots from {t0} exceed lifetime {}",
            block_len * blocks,
            g.lifetime()
        )));
    }
    let xset = bitset_of(n, x.iter().copied());
    // both[b][i]: vertices agent i reaches and returns from inside block b
    let mut both = vec![Vec::with_capacity(m); blocks + 1];
    for (b, row) in both.iter_mut().enumerate().skip(1) {
        let bs = t0 + (b - 1) * block_len;
        let be = bs + block_len - 1;
        for &a in s.vertices() {
            let f = earliest_arrival(g, a, bs, be);
            let back = latest_departure(g, a, bs, be);
            let mut set = FixedBitSet::with_capacity(n);
            for u in f.reached_vertices().filter(|&u| back.reached(u)) {
                set.insert(u as usize);
            }
            set.intersect_with(&xset);
            row.push(set);
        }
    }
    let threshold = x.len().div_ceil(2 * m * m);
    let mut best: Option<GoReturnSplit> = None;
    for t in 2..=2 * m {
        for i in 0..m {
            let mut pre = FixedBitSet::with_capacity(n);
            for row in &both[1..t] {
                pre.union_with(&row[i]);
            }
            let mut post = FixedBitSet::with_capacity(n);
            for row in &both[t + 1..=blocks] {
                post.union_with(&row[i]);
            }
            pre.intersect_with(&post);
            let cand = GoReturnSplit {
                subset: pre.ones().map(|v| v as Vertex).collect(),
                agent: i,
                anchor: s.vertices()[i],
                block: t,
                block_len,
                blocks,
                start: t0,
                threshold,
            };
            if cand.meets_threshold() {
                return Ok(cand);
            }
            if best.as_ref().is_none_or(|b| cand.subset.len() > b.subset.len()) {
                best = Some(cand);
            }
        }
    }
    Ok(best.expect("at least one split block"))
}

/// Split over the `2nm^2` snapshots starting at `t0`. Fails, carrying the
/// largest subset found, when no pair reaches `ceil(|x| / 2m^2)`.
pub fn split_go_and_return<G: Temporal + ?Sized>(
    g: &G,
    s: &AnchorSet,
    x: &[Vertex],
    t0: Time,
) -> Result<GoReturnSplit, StrategyError> {
    let m = s.len();
    let split = split_in(g, s, x, t0, 2 * g.vertex_count() * m * m)?;
    if split.meets_threshold() {
        Ok(split)
    } else {
        Err(StrategyError::SplitBelowThreshold(Box::new(split)))
    }
}
