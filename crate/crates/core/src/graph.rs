//! Static and temporal graph data model.
//!
//! Vertices are dense integers `0..n`. Undirected edges are stored normalized
//! as `(min, max)`. A temporal graph is a shared vertex set plus snapshots
//! `1..=T`, held either explicitly or produced on demand by a seeded oracle.

use std::collections::{HashMap, VecDeque};
use std::ops::RangeInclusive;
use std::sync::{Arc, Mutex};

use num_rational::Ratio;
use petgraph::unionfind::UnionFind;

use crate::error::GraphError;
use crate::gen::policy::SnapshotPolicy;

pub type Vertex = u32;

/// Snapshot index. Snapshots are numbered from 1; 0 means "before the first".
pub type Time = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    lo: Vertex,
    hi: Vertex,
}

impl Edge {
    /// Normalizes `(u, v)` to `(min, max)`. Self-loops are rejected by the
    /// graph constructors, not here.
    pub fn new(u: Vertex, v: Vertex) -> Self {
        if u <= v {
            Edge { lo: u, hi: v }
        } else {
            Edge { lo: v, hi: u }
        }
    }

    pub fn lo(&self) -> Vertex {
        self.lo
    }

    pub fn hi(&self) -> Vertex {
        self.hi
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.lo == v || self.hi == v
    }

    pub fn other(&self, v: Vertex) -> Option<Vertex> {
        if v == self.lo {
            Some(self.hi)
        } else if v == self.hi {
            Some(self.lo)
        } else {
            None
        }
    }
}

impl From<(Vertex, Vertex)> for Edge {
    fn from((u, v): (Vertex, Vertex)) -> Self {
        Edge::new(u, v)
    }
}

/// An undirected simple graph over `0..n` with CSR adjacency.
#[derive(Clone, Debug)]
pub struct StaticGraph {
    n: usize,
    edges: Vec<Edge>,
    offsets: Vec<u32>,
    adjacency: Vec<Vertex>,
}

impl PartialEq for StaticGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for StaticGraph {}

impl StaticGraph {
    /// Builds a graph, rejecting out-of-range endpoints, self-loops and
    /// duplicate edges.
    pub fn new<I, E>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let mut list: Vec<Edge> = Vec::new();
        for e in edges {
            let e = e.into();
            if e.hi as usize >= n {
                return Err(GraphError::VertexOutOfRange { vertex: e.hi, n });
            }
            if e.lo == e.hi {
                return Err(GraphError::SelfLoop(e.lo));
            }
            list.push(e);
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].lo, w[0].hi));
        }
        Ok(Self::from_sorted_unique(n, list))
    }

    /// Like [`StaticGraph::new`] but silently drops duplicates.
    pub fn new_dedup<I, E>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let mut list: Vec<Edge> = edges.into_iter().map(Into::into).collect();
        list.sort_unstable();
        list.dedup();
        Self::new(n, list)
    }

    pub(crate) fn from_sorted_unique(n: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let mut degree = vec![0u32; n + 1];
        for e in &edges {
            degree[e.lo as usize] += 1;
            degree[e.hi as usize] += 1;
        }
        let mut offsets = vec![0u32; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut adjacency = vec![0; 2 * edges.len()];
        for e in &edges {
            adjacency[fill[e.lo as usize] as usize] = e.hi;
            fill[e.lo as usize] += 1;
            adjacency[fill[e.hi as usize] as usize] = e.lo;
            fill[e.hi as usize] += 1;
        }
        for v in 0..n {
            adjacency[offsets[v] as usize..offsets[v + 1] as usize].sort_unstable();
        }
        StaticGraph {
            n,
            edges,
            offsets,
            adjacency,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_unique(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sorted, normalized edge list.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        let v = v as usize;
        &self.adjacency[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).len()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.contains(Edge::new(u, v))
    }

    /// `2|E| / n` as an exact fraction.
    pub fn average_degree(&self) -> Ratio<u64> {
        if self.n == 0 {
            return Ratio::from_integer(0);
        }
        Ratio::new(2 * self.edges.len() as u64, self.n as u64)
    }

    pub fn is_subgraph_of(&self, other: &StaticGraph) -> bool {
        self.n == other.n && self.edges.iter().all(|e| other.contains(*e))
    }

    /// Component label per vertex; labels are dense and ordered by the
    /// smallest vertex of each component.
    pub fn component_labels(&self) -> Vec<u32> {
        let mut uf = UnionFind::<u32>::new(self.n);
        for e in &self.edges {
            uf.union(e.lo, e.hi);
        }
        let mut label_of_root: HashMap<u32, u32> = HashMap::new();
        (0..self.n as u32)
            .map(|v| {
                let root = uf.find(v);
                let next = label_of_root.len() as u32;
                *label_of_root.entry(root).or_insert(next)
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.component_labels().iter().all(|&c| c == 0)
    }

    /// Subgraph induced on `vertices`, relabeled to `0..vertices.len()` in the
    /// given order.
    pub fn induced(&self, vertices: &[Vertex]) -> StaticGraph {
        let local = local_index(self.n, vertices);
        let edges = relabel_edges(self.edges.iter().copied(), &local);
        StaticGraph::from_sorted_unique(vertices.len(), edges)
    }
}

pub(crate) fn local_index(n: usize, vertices: &[Vertex]) -> Vec<Option<u32>> {
    let mut local = vec![None; n];
    for (i, &v) in vertices.iter().enumerate() {
        local[v as usize] = Some(i as u32);
    }
    local
}

fn relabel_edges(edges: impl Iterator<Item = Edge>, local: &[Option<u32>]) -> Vec<Edge> {
    let mut out: Vec<Edge> = edges
        .filter_map(|e| match (local[e.lo as usize], local[e.hi as usize]) {
            (Some(a), Some(b)) => Some(Edge::new(a, b)),
            _ => None,
        })
        .collect();
    out.sort_unstable();
    out
}

/// The designated anchor vertices `S`; agent `i` starts on `anchors[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchorSet {
    vertices: Vec<Vertex>,
}

impl AnchorSet {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::EmptyAnchors);
        }
        let mut seen = vertices.clone();
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateAnchor(w[0]));
        }
        Ok(AnchorSet { vertices })
    }

    pub fn single(v: Vertex) -> Self {
        AnchorSet { vertices: vec![v] }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&a| a == v)
    }

    pub fn check_range(&self, n: usize) -> Result<(), GraphError> {
        match self.vertices.iter().find(|&&v| v as usize >= n) {
            Some(&v) => Err(GraphError::VertexOutOfRange { vertex: v, n }),
            None => Ok(()),
        }
    }
}

/// Read access to a temporal graph. Implementors must be deterministic:
/// `snapshot(t)` always returns the same edge set for the same `t`.
pub trait Temporal: Sync {
    fn vertex_count(&self) -> usize;

    /// Number of snapshots `T`; valid indices are `1..=T`.
    fn lifetime(&self) -> Time;

    fn snapshot(&self, t: Time) -> Arc<StaticGraph>;

    fn underlying(&self) -> &StaticGraph;
}

impl<G: Temporal + ?Sized> Temporal for &G {
    fn vertex_count(&self) -> usize {
        (**self).vertex_count()
    }
    fn lifetime(&self) -> Time {
        (**self).lifetime()
    }
    fn snapshot(&self, t: Time) -> Arc<StaticGraph> {
        (**self).snapshot(t)
    }
    fn underlying(&self) -> &StaticGraph {
        (**self).underlying()
    }
}

/// Bounded FIFO cache of materialized snapshots.
#[derive(Debug)]
pub(crate) struct SnapshotCache {
    capacity: usize,
    inner: Mutex<CacheInner>,
}

#[derive(Debug, Default)]
struct CacheInner {
    map: HashMap<Time, Arc<StaticGraph>>,
    order: VecDeque<Time>,
}

impl SnapshotCache {
    pub(crate) const DEFAULT_CAPACITY: usize = 1 << 14;

    pub(crate) fn new(capacity: usize) -> Self {
        SnapshotCache {
            capacity: capacity.max(1),
            inner: Mutex::new(CacheInner::default()),
        }
    }

    pub(crate) fn get_or_insert_with(&self, t: Time, make: impl FnOnce() -> StaticGraph) -> Arc<StaticGraph> {
        if let Some(hit) = self.inner.lock().unwrap().map.get(&t) {
            return Arc::clone(hit);
        }
        let fresh = Arc::new(make());
        let mut inner = self.inner.lock().unwrap();
        if inner.map.insert(t, Arc::clone(&fresh)).is_none() {
            inner.order.push_back(t);
            while inner.order.len() > self.capacity {
                if let Some(old) = inner.order.pop_front() {
                    inner.map.remove(&old);
                }
            }
        }
        fresh
    }
}

impl Clone for SnapshotCache {
    fn clone(&self) -> Self {
        SnapshotCache::new(self.capacity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backing {
    Explicit {
        snapshots: Vec<Arc<StaticGraph>>,
        /// Snapshots missing from a file are empty instead of an error.
        default_empty: bool,
    },
    Oracle {
        policy: SnapshotPolicy,
        seed: u64,
    },
}

#[derive(Clone, Debug)]
pub struct TemporalGraph {
    lifetime: Time,
    underlying: StaticGraph,
    backing: Backing,
    cache: SnapshotCache,
}

impl PartialEq for TemporalGraph {
    fn eq(&self, other: &Self) -> bool {
        self.lifetime == other.lifetime && self.underlying == other.underlying && self.backing == other.backing
    }
}

impl TemporalGraph {
    /// Explicit graph whose underlying graph is the union of its snapshots.
    pub fn from_snapshots(n: usize, snapshots: Vec<StaticGraph>) -> Result<Self, GraphError> {
        let union = StaticGraph::new_dedup(n, snapshots.iter().flat_map(|s| s.edges().iter().copied()))?;
        Self::explicit(union, snapshots, false)
    }

    /// Explicit graph with a declared underlying graph; every snapshot must be
    /// a subgraph of it.
    pub fn explicit(
        underlying: StaticGraph,
        snapshots: Vec<StaticGraph>,
        default_empty: bool,
    ) -> Result<Self, GraphError> {
        for (i, s) in snapshots.iter().enumerate() {
            if s.n() != underlying.n() {
                return Err(GraphError::VertexCountMismatch {
                    expected: underlying.n(),
                    found: s.n(),
                });
            }
            if let Some(e) = s.edges().iter().find(|e| !underlying.contains(**e)) {
                return Err(GraphError::NotInUnderlying {
                    time: i + 1,
                    u: e.lo(),
                    v: e.hi(),
                });
            }
        }
        Ok(TemporalGraph {
            lifetime: snapshots.len(),
            underlying,
            backing: Backing::Explicit {
                snapshots: snapshots.into_iter().map(Arc::new).collect(),
                default_empty,
            },
            cache: SnapshotCache::new(1),
        })
    }

    /// Oracle-backed graph: snapshot `t` is generated from `(policy, seed, t)`
    /// on first access and cached with bounded capacity.
    pub fn oracle(
        underlying: StaticGraph,
        policy: SnapshotPolicy,
        seed: u64,
        lifetime: Time,
    ) -> Result<Self, GraphError> {
        policy.check(&underlying)?;
        Ok(TemporalGraph {
            lifetime,
            underlying,
            backing: Backing::Oracle { policy, seed },
            cache: SnapshotCache::new(SnapshotCache::DEFAULT_CAPACITY),
        })
    }

    /// Same graph with a different lifetime. Explicit graphs are truncated or
    /// padded with empty snapshots.
    pub fn with_lifetime(&self, lifetime: Time) -> TemporalGraph {
        let backing = match &self.backing {
            Backing::Explicit {
                snapshots,
                default_empty,
            } => {
                let mut snapshots = snapshots.clone();
                snapshots.truncate(lifetime);
                while snapshots.len() < lifetime {
                    snapshots.push(Arc::new(StaticGraph::empty(self.underlying.n())));
                }
                Backing::Explicit {
                    snapshots,
                    default_empty: *default_empty,
                }
            }
            oracle => oracle.clone(),
        };
        TemporalGraph {
            lifetime,
            underlying: self.underlying.clone(),
            backing,
            cache: self.cache.clone(),
        }
    }

    pub fn backing(&self) -> &Backing {
        &self.backing
    }

    pub fn n(&self) -> usize {
        self.underlying.n()
    }
}

impl Temporal for TemporalGraph {
    fn vertex_count(&self) -> usize {
        self.underlying.n()
    }

    fn lifetime(&self) -> Time {
        self.lifetime
    }

    fn snapshot(&self, t: Time) -> Arc<StaticGraph> {
        assert!(
            (1..=self.lifetime).contains(&t),
            "snapshot {t} outside 1..={}",
            self.lifetime
        );
        match &self.backing {
            Backing::Explicit { snapshots, .. } => Arc::clone(&snapshots[t - 1]),
            Backing::Oracle { policy, seed } => self
                .cache
                .get_or_insert_with(t, || policy.materialize(&self.underlying, *seed, t)),
        }
    }

    fn underlying(&self) -> &StaticGraph {
        &self.underlying
    }
}

/// A temporal graph restricted to a vertex subset, relabeled to local ids
/// `0..k` in the order given. Optionally capped to a shorter lifetime.
pub struct InducedView<'g, G: Temporal + ?Sized> {
    parent: &'g G,
    vertices: Vec<Vertex>,
    local: Vec<Option<u32>>,
    underlying: StaticGraph,
    lifetime: Time,
    cache: SnapshotCache,
}

impl<'g, G: Temporal + ?Sized> InducedView<'g, G> {
    pub fn new(parent: &'g G, vertices: Vec<Vertex>) -> Self {
        let local = local_index(parent.vertex_count(), &vertices);
        let underlying = parent.underlying().induced(&vertices);
        InducedView {
            lifetime: parent.lifetime(),
            parent,
            vertices,
            local,
            underlying,
            cache: SnapshotCache::new(1024),
        }
    }

    pub fn capped(mut self, lifetime: Time) -> Self {
        self.lifetime = lifetime.min(self.parent.lifetime());
        self
    }

    pub fn global(&self, local: Vertex) -> Vertex {
        self.vertices[local as usize]
    }

    pub fn local(&self, global: Vertex) -> Option<Vertex> {
        self.local.get(global as usize).copied().flatten()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }
}

impl<G: Temporal + ?Sized> Temporal for InducedView<'_, G> {
    fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    fn lifetime(&self) -> Time {
        self.lifetime
    }

    fn snapshot(&self, t: Time) -> Arc<StaticGraph> {
        assert!((1..=self.lifetime).contains(&t));
        self.cache.get_or_insert_with(t, || {
            let full = self.parent.snapshot(t);
            let edges = relabel_edges(full.edges().iter().copied(), &self.local);
            StaticGraph::from_sorted_unique(self.vertices.len(), edges)
        })
    }

    fn underlying(&self) -> &StaticGraph {
        &self.underlying
    }
}

/// Average degree `2|E(U)| / n` of the underlying graph, exact.
pub fn average_degree<G: Temporal + ?Sized>(g: &G) -> Ratio<u64> {
    g.underlying().average_degree()
}

fn check_window<G: Temporal + ?Sized>(g: &G, window: &RangeInclusive<Time>) -> Result<(), GraphError> {
    if window.is_empty() {
        return Err(GraphError::EmptyWindow);
    }
    if *window.start() < 1 || *window.end() > g.lifetime() {
        return Err(GraphError::WindowOutOfRange {
            start: *window.start(),
            end: *window.end(),
            lifetime: g.lifetime(),
        });
    }
    Ok(())
}

/// First `(t, v)` in the window where `v` shares no component with an anchor.
pub fn first_s_violation<G: Temporal + ?Sized>(
    g: &G,
    s: &AnchorSet,
    window: RangeInclusive<Time>,
) -> Result<Option<(Time, Vertex)>, GraphError> {
    check_window(g, &window)?;
    s.check_range(g.vertex_count())?;
    for t in window {
        let labels = g.snapshot(t).component_labels();
        let mut anchored = vec![false; g.vertex_count()];
        for &a in s.vertices() {
            anchored[labels[a as usize] as usize] = true;
        }
        if let Some(v) = (0..g.vertex_count()).find(|&v| !anchored[labels[v] as usize]) {
            return Ok(Some((t, v as Vertex)));
        }
    }
    Ok(None)
}

/// True iff in every snapshot of the window every vertex lies in a component
/// containing some anchor.
pub fn is_always_s_connected<G: Temporal + ?Sized>(
    g: &G,
    s: &AnchorSet,
    window: RangeInclusive<Time>,
) -> Result<bool, GraphError> {
    Ok(first_s_violation(g, s, window)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle4() -> StaticGraph {
        StaticGraph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn average_degree_small_cases() {
        assert_eq!(cycle4().average_degree(), Ratio::from_integer(2));
        let single = StaticGraph::new(2, [(0, 1)]).unwrap();
        assert_eq!(single.average_degree(), Ratio::from_integer(1));
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(StaticGraph::new(3, [(1, 1)]), Err(GraphError::SelfLoop(1))));
        assert!(matches!(
            StaticGraph::new(3, [(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, .. })
        ));
        assert!(matches!(
            StaticGraph::new(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        ));
    }

    #[test]
    fn neighbors_sorted() {
        let g = StaticGraph::new(4, [(2, 0), (0, 3), (1, 0)]).unwrap();
        assert_eq!(g.neighbors(0), &[1, 2, 3]);
        assert_eq!(g.neighbors(3), &[0]);
    }

    #[test]
    fn component_labels_dense_and_ordered() {
        let g = StaticGraph::new(5, [(3, 4), (0, 2)]).unwrap();
        assert_eq!(g.component_labels(), vec![0, 1, 0, 2, 2]);
    }

    #[test]
    fn s_connectivity_checks() {
        let tree = StaticGraph::new(4, [(0, 1), (1, 2), (1, 3)]).unwrap();
        let g = TemporalGraph::from_snapshots(4, vec![tree.clone(), tree]).unwrap();
        assert!(is_always_s_connected(&g, &AnchorSet::single(3), 1..=2).unwrap());

        let isolated = StaticGraph::new(4, [(0, 1), (1, 2)]).unwrap();
        let g = TemporalGraph::from_snapshots(4, vec![isolated]).unwrap();
        assert!(!is_always_s_connected(&g, &AnchorSet::single(0), 1..=1).unwrap());
        assert!(is_always_s_connected(&g, &AnchorSet::new(vec![0, 3]).unwrap(), 1..=1).unwrap());
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 2..=1;
        assert!(matches!(
            is_always_s_connected(&g, &AnchorSet::single(0), empty),
            Err(GraphError::EmptyWindow)
        ));
    }

    #[test]
    fn explicit_rejects_edges_outside_underlying() {
        let under = StaticGraph::new(3, [(0, 1)]).unwrap();
        let snap = StaticGraph::new(3, [(1, 2)]).unwrap();
        assert!(matches!(
            TemporalGraph::explicit(under, vec![snap], false),
            Err(GraphError::NotInUnderlying { time: 1, .. })
        ));
    }

    #[test]
    fn induced_view_relabels() {
        let snap = StaticGraph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let g = TemporalGraph::from_snapshots(4, vec![snap]).unwrap();
        let view = InducedView::new(&g, vec![3, 2, 0]);
        let s = view.snapshot(1);
        assert_eq!(s.edges(), &[Edge::new(0, 1)]);
        assert_eq!(view.global(1), 2);
        assert_eq!(view.local(0), Some(2));
        assert_eq!(view.local(1), None);
    }
}
