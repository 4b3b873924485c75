//! Seeded instance generators. Every instance is a pure function of its
//! [`GeneratorSpec`].

pub mod policy;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use policy::SnapshotPolicy;

use crate::error::GraphError;
use crate::graph::{AnchorSet, Edge, StaticGraph, TemporalGraph, Time, Vertex};
use crate::reductions::interval::default_budget;
use crate::reductions::{IntervalModel, TreeDecomposition};
use crate::Rational;
use policy::keyed_rng;

const UNDERLYING_DOMAIN: u64 = 0x554e_4445;
const ANCHOR_DOMAIN: u64 = 0x414e_4348;
const POLICY_SEED_DOMAIN: u64 = 0x504f_4c49;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    AlwaysConnected,
    SConnected,
    KTree,
    Interval,
    Grid,
    DeficientGrid,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::AlwaysConnected,
        Family::SConnected,
        Family::KTree,
        Family::Interval,
        Family::Grid,
        Family::DeficientGrid,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Family::AlwaysConnected => "always-connected",
            Family::SConnected => "s-connected",
            Family::KTree => "k-tree",
            Family::Interval => "interval",
            Family::Grid => "grid",
            Family::DeficientGrid => "k-edge-deficient-grid",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| format!("unknown family {s:?}"))
    }
}

/// Serialized as a single `key=value` line, e.g.
/// `family=s-connected n=20 m=2 seed=7 T=400 edges=10 extra=200 merge=100`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub lifetime: Time,
    /// Extra underlying edges beyond a spanning tree.
    pub edges: usize,
    /// Per-mille edge densities of s-connected snapshots.
    pub extra_pm: u16,
    pub merge_pm: u16,
    /// Treewidth of k-tree instances; removed edges per snapshot of
    /// deficient grids.
    pub k: usize,
    /// Per-mille of k-tree edges kept.
    pub keep_pm: u16,
    /// Grid rows (columns are `n / rows`).
    pub rows: usize,
    /// Per-mille drop probability of grid snapshots.
    pub drop_pm: u16,
    /// Maximum interval length, in eighths.
    pub span: usize,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize, m: usize, seed: u64, lifetime: Time) -> Self {
        GeneratorSpec {
            family,
            n,
            m,
            seed,
            lifetime,
            edges: n / 2,
            extra_pm: 200,
            merge_pm: 100,
            k: 2,
            keep_pm: 800,
            rows: 0,
            drop_pm: 500,
            span: 24,
        }
    }

    /// Grid rows, defaulting to the largest divisor of `n` not above `sqrt n`.
    pub fn grid_rows(&self) -> usize {
        if self.rows > 0 {
            return self.rows;
        }
        (1..=self.n.max(1))
            .take_while(|r| r * r <= self.n)
            .filter(|r| self.n.is_multiple_of(*r))
            .last()
            .unwrap_or(1)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.n == 0 {
            return Err("n must be positive".into());
        }
        if self.m == 0 || self.m > self.n {
            return Err(format!("m = {} outside 1..={}", self.m, self.n));
        }
        if self.lifetime == 0 {
            return Err("lifetime must be positive".into());
        }
        if self.extra_pm > 1000 || self.merge_pm > 1000 || self.keep_pm > 1000 || self.drop_pm > 1000 {
            return Err("per-mille parameters must be at most 1000".into());
        }
        match self.family {
            Family::KTree if self.k == 0 || self.k >= self.n => Err(format!("k = {} outside 1..{}", self.k, self.n)),
            Family::Grid | Family::DeficientGrid if !self.n.is_multiple_of(self.grid_rows()) => {
                Err(format!("rows = {} does not divide n = {}", self.grid_rows(), self.n))
            }
            Family::Interval if self.span == 0 => Err("span must be positive".into()),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "family={} n={} m={} seed={} T={} edges={} extra={} merge={} k={} keep={} rows={} drop={} span={}",
            self.family,
            self.n,
            self.m,
            self.seed,
            self.lifetime,
            self.edges,
            self.extra_pm,
            self.merge_pm,
            self.k,
            self.keep_pm,
            self.rows,
            self.drop_pm,
            self.span
        )
    }
}

impl FromStr for GeneratorSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut family = None;
        let mut fields: Vec<(&str, &str)> = Vec::new();
        for tok in s.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| format!("bad spec token {tok:?}"))?;
            if k == "family" {
                family = Some(v.parse::<Family>()?);
            } else {
                fields.push((k, v));
            }
        }
        let family = family.ok_or("spec lacks family")?;
        let mut spec = GeneratorSpec::new(family, 0, 1, 0, 1);
        let mut n_given = false;
        for (k, v) in fields {
            let num = |v: &str| v.parse::<u64>().map_err(|e| format!("{k}: {e}"));
            let pm = |v: &str| v.parse::<u16>().map_err(|e| format!("{k}: {e}"));
            match k {
                "n" => {
                    spec.n = num(v)? as usize;
                    n_given = true;
                }
                "m" => spec.m = num(v)? as usize,
                "seed" => spec.seed = num(v)?,
                "T" => spec.lifetime = num(v)? as usize,
                "edges" => spec.edges = num(v)? as usize,
                "extra" => spec.extra_pm = pm(v)?,
                "merge" => spec.merge_pm = pm(v)?,
                "k" => spec.k = num(v)? as usize,
                "keep" => spec.keep_pm = pm(v)?,
                "rows" => spec.rows = num(v)? as usize,
                "drop" => spec.drop_pm = pm(v)?,
                "span" => spec.span = num(v)? as usize,
                _ => return Err(format!("unknown spec key {k:?}")),
            }
        }
        if !n_given {
            return Err("spec lacks n".into());
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// A generated instance and the side structures of its family.
#[derive(Clone, Debug)]
pub struct Instance {
    pub spec: GeneratorSpec,
    pub graph: TemporalGraph,
    pub anchors: AnchorSet,
    pub decomposition: Option<TreeDecomposition>,
    pub intervals: Option<IntervalModel<Rational>>,
}

fn rng_for(spec: &GeneratorSpec, domain: u64) -> ChaCha8Rng {
    keyed_rng(spec.seed, domain, spec.family as u64)
}

fn sample_anchors(spec: &GeneratorSpec) -> AnchorSet {
    let mut rng = rng_for(spec, ANCHOR_DOMAIN);
    let mut picked: Vec<Vertex> = rand::seq::index::sample(&mut rng, spec.n, spec.m)
        .into_iter()
        .map(|v| v as Vertex)
        .collect();
    picked.sort_unstable();
    AnchorSet::new(picked).expect("sampled anchors are distinct")
}

fn policy_seed(spec: &GeneratorSpec) -> u64 {
    rng_for(spec, POLICY_SEED_DOMAIN).random()
}

/// Random connected graph: a random recursive tree over a shuffled vertex
/// order plus `extra` further edges (capped by the complete graph).
pub fn random_connected(n: usize, extra: usize, rng: &mut impl Rng) -> StaticGraph {
    let mut order: Vec<Vertex> = (0..n as Vertex).collect();
    order.shuffle(rng);
    let mut edges: Vec<Edge> = (1..n)
        .map(|i| Edge::new(order[i], order[rng.random_range(0..i)]))
        .collect();
    let max_edges = n * n.saturating_sub(1) / 2;
    let target = (edges.len() + extra).min(max_edges);
    edges.sort_unstable();
    let mut present: std::collections::BTreeSet<Edge> = edges.into_iter().collect();
    while present.len() < target {
        let u = rng.random_range(0..n as Vertex);
        let v = rng.random_range(0..n as Vertex);
        if u != v {
            present.insert(Edge::new(u, v));
        }
    }
    StaticGraph::from_sorted_unique(n, present.into_iter().collect())
}

/// Oracle-backed temporal graph over `underlying`.
pub fn gen_temporal_from_static(
    underlying: StaticGraph,
    policy: SnapshotPolicy,
    seed: u64,
    lifetime: Time,
) -> Result<TemporalGraph, GraphError> {
    TemporalGraph::oracle(underlying, policy, seed, lifetime)
}

/// S-connected instance: each snapshot grows anchor-rooted random trees over
/// a random partition of the vertices, then adds extra underlying edges.
pub fn gen_s_connected(spec: &GeneratorSpec) -> Result<(TemporalGraph, AnchorSet), GraphError> {
    let mut rng = rng_for(spec, UNDERLYING_DOMAIN);
    let underlying = random_connected(spec.n, spec.edges, &mut rng);
    let anchors = sample_anchors(spec);
    let policy = SnapshotPolicy::SConnected {
        anchors: anchors.vertices().to_vec(),
        extra_pm: spec.extra_pm,
        merge_pm: spec.merge_pm,
    };
    let g = gen_temporal_from_static(underlying, policy, policy_seed(spec), spec.lifetime)?;
    Ok((g, anchors))
}

/// Random partial k-tree with a width-k tree decomposition. Edges are kept
/// with probability `keep_pm / 1000`, but never so as to disconnect.
pub fn gen_ktree(spec: &GeneratorSpec) -> (StaticGraph, TreeDecomposition) {
    let (n, k) = (spec.n, spec.k.min(spec.n.saturating_sub(1)).max(1));
    let mut rng = rng_for(spec, UNDERLYING_DOMAIN);
    let mut label: Vec<Vertex> = (0..n as Vertex).collect();
    label.shuffle(&mut rng);
    let first = (k + 1).min(n);
    let mut bags: Vec<Vec<Vertex>> = vec![label[..first].to_vec()];
    let mut tree = Vec::new();
    let mut edges = Vec::new();
    for i in 0..first {
        for j in i + 1..first {
            edges.push(Edge::new(label[i], label[j]));
        }
    }
    for &v in &label[first..] {
        let parent = rng.random_range(0..bags.len());
        let mut clique = bags[parent].clone();
        clique.swap_remove(rng.random_range(0..clique.len()));
        for &u in &clique {
            edges.push(Edge::new(u, v));
        }
        clique.push(v);
        tree.push((parent, bags.len()));
        bags.push(clique);
    }
    edges.shuffle(&mut rng);
    let mut uf = petgraph::unionfind::UnionFind::<u32>::new(n);
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for e in edges {
        if rng.random_ratio(u32::from(spec.keep_pm), 1000) {
            uf.union(e.lo(), e.hi());
            kept.push(e);
        } else {
            dropped.push(e);
        }
    }
    for e in dropped {
        if uf.union(e.lo(), e.hi()) {
            kept.push(e);
        }
    }
    kept.sort_unstable();
    for b in &mut bags {
        b.sort_unstable();
    }
    let g = StaticGraph::from_sorted_unique(n, kept);
    (g, TreeDecomposition::new(bags, tree))
}

/// Connected interval model with left endpoints strictly increasing in
/// vertex order. Endpoints are multiples of 1/8.
///
/// Lengths are capped at `ceil(n^(2/3)) - 2` eighths: lefts advance by at
/// least one eighth, so every clique then stays below `ceil(n^(2/3))`, the
/// interval division's precondition (for `n >= 3`).
pub fn gen_interval(spec: &GeneratorSpec) -> (StaticGraph, IntervalModel<Rational>) {
    let mut rng = rng_for(spec, UNDERLYING_DOMAIN);
    let eighth = |x: i64| Rational::new(x, 8);
    let span = spec.span.min(default_budget(spec.n).saturating_sub(2)).max(1);
    let mut ivs = Vec::with_capacity(spec.n);
    let (mut left, mut reach) = (0i64, 0i64);
    for j in 0..spec.n {
        if j > 0 {
            left += rng.random_range(1..=(reach - left).clamp(1, 8));
        }
        let right = left + rng.random_range(1..=span as i64);
        reach = reach.max(right);
        ivs.push((eighth(left), eighth(right)));
    }
    let model = IntervalModel::new(ivs).expect("generated intervals are well formed");
    (model.graph(), model)
}

/// `rows x cols` grid, vertex `r * cols + c`.
pub fn gen_grid(rows: usize, cols: usize) -> StaticGraph {
    let id = |r: usize, c: usize| (r * cols + c) as Vertex;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push(Edge::new(id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push(Edge::new(id(r, c), id(r + 1, c)));
            }
        }
    }
    edges.sort_unstable();
    StaticGraph::from_sorted_unique(rows * cols, edges)
}

/// Builds the instance described by `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<Instance, GraphError> {
    spec.validate().map_err(GraphError::PolicyMismatch)?;
    let seed = policy_seed(spec);
    let mut decomposition = None;
    let mut intervals = None;
    let (graph, anchors) = match spec.family {
        Family::SConnected => gen_s_connected(spec)?,
        Family::AlwaysConnected => {
            let mut rng = rng_for(spec, UNDERLYING_DOMAIN);
            let g = random_connected(spec.n, spec.edges, &mut rng);
            let g = gen_temporal_from_static(g, SnapshotPolicy::SpanningTree, seed, spec.lifetime)?;
            (g, sample_anchors(spec))
        }
        Family::KTree => {
            let (g, td) = gen_ktree(spec);
            decomposition = Some(td);
            let g = gen_temporal_from_static(g, SnapshotPolicy::SpanningTree, seed, spec.lifetime)?;
            (g, sample_anchors(spec))
        }
        Family::Interval => {
            let (g, model) = gen_interval(spec);
            intervals = Some(model);
            let g = gen_temporal_from_static(g, SnapshotPolicy::SpanningTree, seed, spec.lifetime)?;
            (g, sample_anchors(spec))
        }
        Family::Grid | Family::DeficientGrid => {
            let rows = spec.grid_rows();
            let g = gen_grid(rows, spec.n / rows);
            let policy = if spec.family == Family::Grid {
                SnapshotPolicy::OnceDeficient { drop_pm: spec.drop_pm }
            } else {
                SnapshotPolicy::EdgeDeficient { k: spec.k }
            };
            let g = gen_temporal_from_static(g, policy, seed, spec.lifetime)?;
            (g, sample_anchors(spec))
        }
    };
    Ok(Instance {
        spec: spec.clone(),
        graph,
        anchors,
        decomposition,
        intervals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_always_s_connected, Temporal};

    #[test]
    fn spec_round_trip() {
        let mut spec = GeneratorSpec::new(Family::KTree, 30, 2, 9, 100);
        spec.k = 3;
        let text = spec.to_string();
        assert_eq!(text.parse::<GeneratorSpec>().unwrap(), spec);
        assert!("family=grid n=10 rows=3".parse::<GeneratorSpec>().is_err());
        assert!("family=nope n=3".parse::<GeneratorSpec>().is_err());
    }

    #[test]
    fn single_anchor_is_connected() {
        let spec = GeneratorSpec::new(Family::SConnected, 15, 1, 3, 20);
        let (g, _) = gen_s_connected(&spec).unwrap();
        for t in 1..=20 {
            assert!(g.snapshot(t).is_connected());
        }
    }

    #[test]
    fn every_anchor_may_be_isolated() {
        let mut spec = GeneratorSpec::new(Family::SConnected, 6, 6, 3, 10);
        spec.extra_pm = 0;
        spec.merge_pm = 0;
        let (g, s) = gen_s_connected(&spec).unwrap();
        assert!(is_always_s_connected(&g, &s, 1..=10).unwrap());
        assert_eq!(g.snapshot(1).edge_count(), 0);
    }

    #[test]
    fn generation_is_deterministic() {
        for family in Family::ALL {
            let spec = GeneratorSpec::new(family, 16, 2, 5, 8);
            let a = generate(&spec).unwrap();
            let b = generate(&spec).unwrap();
            assert_eq!(a.graph, b.graph);
            assert_eq!(a.anchors, b.anchors);
            for t in 1..=8 {
                assert_eq!(a.graph.snapshot(t), b.graph.snapshot(t));
            }
        }
    }

    #[test]
    fn grid_shape() {
        let g = gen_grid(3, 4);
        assert_eq!(g.edge_count(), 3 * 3 + 2 * 4);
        assert!(g.has_edge(5, 6) && g.has_edge(1, 5) && !g.has_edge(3, 4));
    }
}
