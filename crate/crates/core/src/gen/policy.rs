//! Seeded snapshot oracles. Snapshot `t` depends only on `(policy, seed, t)`,
//! so any snapshot can be materialized without generating its predecessors.

use std::fmt;
use std::str::FromStr;

use petgraph::unionfind::UnionFind;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GraphError;
use crate::graph::{Edge, StaticGraph, Time, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SnapshotPolicy {
    /// Every snapshot equals the underlying graph.
    Static,
    /// A random spanning tree of the underlying graph per snapshot.
    SpanningTree,
    /// At most `k` underlying edges removed per snapshot, never disconnecting.
    EdgeDeficient { k: usize },
    /// Each vertex loses at most one incident edge per snapshot; each eligible
    /// edge is dropped with probability `drop_pm / 1000`.
    OnceDeficient { drop_pm: u16 },
    /// Anchor-rooted random forest over a random partition (one anchor per
    /// part) plus extra edges inside parts (`extra_pm`) and across parts
    /// (`merge_pm`), both in per-mille.
    SConnected {
        anchors: Vec<Vertex>,
        extra_pm: u16,
        merge_pm: u16,
    },
}

/// Counter-style keyed generator: one independent stream per `(seed, t)`.
pub(crate) fn keyed_rng(seed: u64, domain: u64, counter: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&counter.to_le_bytes());
    key[16..24].copy_from_slice(&domain.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

const SNAPSHOT_DOMAIN: u64 = 0x534e_4150;

impl SnapshotPolicy {
    /// Checks that the policy can uphold its connectivity contract on
    /// `underlying`.
    pub fn check(&self, underlying: &StaticGraph) -> Result<(), GraphError> {
        match self {
            SnapshotPolicy::Static => Ok(()),
            SnapshotPolicy::SpanningTree
            | SnapshotPolicy::EdgeDeficient { .. }
            | SnapshotPolicy::OnceDeficient { .. } => {
                if underlying.is_connected() {
                    Ok(())
                } else {
                    Err(GraphError::PolicyMismatch(format!(
                        "{self} needs a connected underlying graph"
                    )))
                }
            }
            SnapshotPolicy::SConnected { anchors, .. } => {
                if anchors.is_empty() {
                    return Err(GraphError::EmptyAnchors);
                }
                let n = underlying.n();
                if let Some(&v) = anchors.iter().find(|&&v| v as usize >= n) {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
                let labels = underlying.component_labels();
                let mut anchored = vec![false; n];
                for &a in anchors {
                    anchored[labels[a as usize] as usize] = true;
                }
                if (0..n).any(|v| !anchored[labels[v] as usize]) {
                    return Err(GraphError::PolicyMismatch(
                        "some vertex has no anchor in its underlying component".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn materialize(&self, underlying: &StaticGraph, seed: u64, t: Time) -> StaticGraph {
        let mut rng = keyed_rng(seed, SNAPSHOT_DOMAIN, t as u64);
        let n = underlying.n();
        let mut edges = match self {
            SnapshotPolicy::Static => underlying.edges().to_vec(),
            SnapshotPolicy::SpanningTree => {
                let mut shuffled = underlying.edges().to_vec();
                shuffled.shuffle(&mut rng);
                let mut uf = UnionFind::<u32>::new(n);
                shuffled.retain(|e| uf.union(e.lo(), e.hi()));
                shuffled
            }
            SnapshotPolicy::EdgeDeficient { k } => {
                let all = underlying.edges();
                let amount = (*k).min(all.len());
                let picked = rand::seq::index::sample(&mut rng, all.len(), amount).into_vec();
                let mut removed = vec![false; all.len()];
                for &i in &picked {
                    removed[i] = true;
                }
                let dropped: Vec<Edge> = picked.iter().map(|&i| all[i]).collect();
                let kept = all.iter().zip(&removed).filter(|(_, &r)| !r).map(|(e, _)| *e).collect();
                restore_connectivity(n, kept, &dropped)
            }
            SnapshotPolicy::OnceDeficient { drop_pm } => {
                let mut order = underlying.edges().to_vec();
                order.shuffle(&mut rng);
                let mut touched = vec![false; n];
                let mut kept = Vec::with_capacity(order.len());
                let mut dropped = Vec::new();
                for e in order {
                    let (a, b) = (e.lo() as usize, e.hi() as usize);
                    if !touched[a] && !touched[b] && rng.random_ratio(u32::from(*drop_pm), 1000) {
                        touched[a] = true;
                        touched[b] = true;
                        dropped.push(e);
                    } else {
                        kept.push(e);
                    }
                }
                restore_connectivity(n, kept, &dropped)
            }
            SnapshotPolicy::SConnected {
                anchors,
                extra_pm,
                merge_pm,
            } => s_connected_snapshot(underlying, anchors, *extra_pm, *merge_pm, &mut rng),
        };
        edges.sort_unstable();
        StaticGraph::from_sorted_unique(n, edges)
    }
}

/// Adds back dropped edges (in order) that join different components of
/// `kept`.
fn restore_connectivity(n: usize, mut kept: Vec<Edge>, dropped: &[Edge]) -> Vec<Edge> {
    let mut uf = UnionFind::<u32>::new(n);
    for e in &kept {
        uf.union(e.lo(), e.hi());
    }
    for e in dropped {
        if uf.union(e.lo(), e.hi()) {
            kept.push(*e);
        }
    }
    kept
}

fn s_connected_snapshot(
    underlying: &StaticGraph,
    anchors: &[Vertex],
    extra_pm: u16,
    merge_pm: u16,
    rng: &mut ChaCha8Rng,
) -> Vec<Edge> {
    let n = underlying.n();
    let mut part: Vec<Option<u32>> = vec![None; n];
    let mut frontier: Vec<(Vertex, Vertex)> = Vec::new();
    for (i, &a) in anchors.iter().enumerate() {
        part[a as usize] = Some(i as u32);
    }
    for &a in anchors {
        frontier.extend(underlying.neighbors(a).iter().map(|&b| (a, b)));
    }
    let mut tree = Vec::with_capacity(n);
    while !frontier.is_empty() {
        let pick = rng.random_range(0..frontier.len());
        let (a, b) = frontier.swap_remove(pick);
        if part[b as usize].is_some() {
            continue;
        }
        part[b as usize] = part[a as usize];
        tree.push(Edge::new(a, b));
        frontier.extend(
            underlying
                .neighbors(b)
                .iter()
                .filter(|&&c| part[c as usize].is_none())
                .map(|&c| (b, c)),
        );
    }
    tree.sort_unstable();
    let mut edges = tree.clone();
    for e in underlying.edges() {
        if tree.binary_search(e).is_ok() {
            continue;
        }
        let same = part[e.lo() as usize] == part[e.hi() as usize];
        let pm = if same { extra_pm } else { merge_pm };
        if pm > 0 && rng.random_ratio(u32::from(pm), 1000) {
            edges.push(*e);
        }
    }
    edges
}

impl fmt::Display for SnapshotPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SnapshotPolicy::Static => write!(f, "static"),
            SnapshotPolicy::SpanningTree => write!(f, "spanning-tree"),
            SnapshotPolicy::EdgeDeficient { k } => write!(f, "edge-deficient:k={k}"),
            SnapshotPolicy::OnceDeficient { drop_pm } => write!(f, "once-deficient:drop={drop_pm}"),
            SnapshotPolicy::SConnected {
                anchors,
                extra_pm,
                merge_pm,
            } => {
                let ids: Vec<String> = anchors.iter().map(u32::to_string).collect();
                write!(
                    f,
                    "s-connected:extra={extra_pm},merge={merge_pm},anchors={}",
                    ids.join("/")
                )
            }
        }
    }
}

impl FromStr for SnapshotPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let mut params = std::collections::BTreeMap::new();
        for kv in args.split(',').filter(|kv| !kv.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| format!("bad policy parameter {kv:?}"))?;
            params.insert(k, v);
        }
        let num = |key: &str| -> Result<u64, String> {
            params
                .get(key)
                .ok_or_else(|| format!("policy {name} needs {key}"))?
                .parse()
                .map_err(|_| format!("bad value for {key}"))
        };
        let pm = |key: &str| -> Result<u16, String> {
            let v = num(key)?;
            u16::try_from(v)
                .ok()
                .filter(|&v| v <= 1000)
                .ok_or_else(|| format!("{key} must be per-mille"))
        };
        match name {
            "static" => Ok(SnapshotPolicy::Static),
            "spanning-tree" => Ok(SnapshotPolicy::SpanningTree),
            "edge-deficient" => Ok(SnapshotPolicy::EdgeDeficient { k: num("k")? as usize }),
            "once-deficient" => Ok(SnapshotPolicy::OnceDeficient { drop_pm: pm("drop")? }),
            "s-connected" => {
                let anchors = params
                    .get("anchors")
                    .ok_or("s-connected needs anchors")?
                    .split('/')
                    .map(|a| a.parse::<Vertex>().map_err(|_| format!("bad anchor {a:?}")))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(SnapshotPolicy::SConnected {
                    anchors,
                    extra_pm: pm("extra")?,
                    merge_pm: pm("merge")?,
                })
            }
            other => Err(format!("unknown snapshot policy {other:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid3() -> StaticGraph {
        let mut edges = Vec::new();
        for r in 0..3u32 {
            for c in 0..3u32 {
                let v = r * 3 + c;
                if c + 1 < 3 {
                    edges.push((v, v + 1));
                }
                if r + 1 < 3 {
                    edges.push((v, v + 3));
                }
            }
        }
        StaticGraph::new(9, edges).unwrap()
    }

    #[test]
    fn materialize_is_deterministic() {
        let g = grid3();
        let p = SnapshotPolicy::SpanningTree;
        for t in 1..20 {
            assert_eq!(p.materialize(&g, 7, t), p.materialize(&g, 7, t));
        }
        assert_ne!(
            (1..20).map(|t| p.materialize(&g, 7, t)).collect::<Vec<_>>(),
            (1..20).map(|t| p.materialize(&g, 8, t)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn spanning_tree_snapshots() {
        let g = grid3();
        for t in 1..50 {
            let s = SnapshotPolicy::SpanningTree.materialize(&g, 1, t);
            assert_eq!(s.edge_count(), 8);
            assert!(s.is_connected());
            assert!(s.is_subgraph_of(&g));
        }
    }

    #[test]
    fn zero_deficiency_is_static() {
        let g = grid3();
        let s = SnapshotPolicy::EdgeDeficient { k: 0 }.materialize(&g, 3, 5);
        assert_eq!(s, g);
    }

    #[test]
    fn policy_ids_round_trip() {
        for p in [
            SnapshotPolicy::Static,
            SnapshotPolicy::SpanningTree,
            SnapshotPolicy::EdgeDeficient { k: 3 },
            SnapshotPolicy::OnceDeficient { drop_pm: 250 },
            SnapshotPolicy::SConnected {
                anchors: vec![0, 4, 7],
                extra_pm: 100,
                merge_pm: 5,
            },
        ] {
            assert_eq!(p.to_string().parse::<SnapshotPolicy>().unwrap(), p);
        }
        assert!("bogus".parse::<SnapshotPolicy>().is_err());
    }

    #[test]
    fn disconnected_underlying_rejected() {
        let g = StaticGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(SnapshotPolicy::SpanningTree.check(&g).is_err());
        let ok = SnapshotPolicy::SConnected {
            anchors: vec![0, 2],
            extra_pm: 0,
            merge_pm: 0,
        };
        assert!(ok.check(&g).is_ok());
    }
}
