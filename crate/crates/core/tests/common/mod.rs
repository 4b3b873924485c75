//! Brute-force reference implementations used by the integration tests.
//! None of these call into the reachability or division code under test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tempex::gen::{generate, Family, GeneratorSpec, Instance};
use tempex::reductions::RBDivision;
use tempex::{ExplorationSchedule, StaticGraph, Temporal, TemporalGraph, TemporalWalk, Time, Vertex};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn instance(family: Family, n: usize, m: usize, seed: u64, lifetime: Time) -> Instance {
    generate(&GeneratorSpec::new(family, n, m, seed, lifetime)).expect("generator accepts spec")
}

/// Random target subset of `0..n` of size `k`, sorted.
pub fn subset(rng: &mut impl Rng, n: usize, k: usize) -> Vec<Vertex> {
    let mut x: Vec<Vertex> = sample(rng, n, k.min(n)).into_iter().map(|v| v as Vertex).collect();
    x.sort_unstable();
    x
}

fn matrix(snap: &StaticGraph, n: usize) -> Vec<bool> {
    let mut m = vec![false; n * n];
    for e in snap.edges() {
        let (a, b) = (e.lo() as usize, e.hi() as usize);
        m[a * n + b] = true;
        m[b * n + a] = true;
    }
    m
}

fn active(snap: &StaticGraph, u: usize, v: usize) -> bool {
    snap.edges().iter().any(|e| {
        let (a, b) = (e.lo() as usize, e.hi() as usize);
        (a, b) == (u, v) || (a, b) == (v, u)
    })
}

/// Exhaustive dynamic program over `(vertex, time)` states: `reach[t][u]`
/// says whether `u` can be occupied after snapshot `t0 - 1 + t`.
/// Returns the earliest such time per vertex (`t0 - 1` for the source).
pub fn dp_earliest<G: Temporal>(g: &G, src: Vertex, t0: Time, t1: Time) -> Vec<Option<Time>> {
    let n = g.vertex_count();
    let mut here = vec![false; n];
    here[src as usize] = true;
    let mut first = vec![None; n];
    first[src as usize] = Some(t0 - 1);
    for t in t0..=t1 {
        let adj = matrix(&g.snapshot(t), n);
        let mut next = here.clone();
        for u in 0..n {
            if !here[u] {
                continue;
            }
            for v in 0..n {
                if adj[u * n + v] {
                    next[v] = true;
                }
            }
        }
        for v in 0..n {
            if next[v] && first[v].is_none() {
                first[v] = Some(t);
            }
        }
        here = next;
    }
    first
}

/// Time-reversed program: latest snapshot at which each vertex can depart and
/// still reach `dst` by `t1` (`t1 + 1` for `dst`).
pub fn dp_latest<G: Temporal>(g: &G, dst: Vertex, t0: Time, t1: Time) -> Vec<Option<Time>> {
    let n = g.vertex_count();
    let mut here = vec![false; n];
    here[dst as usize] = true;
    let mut last = vec![None; n];
    last[dst as usize] = Some(t1 + 1);
    for t in (t0..=t1).rev() {
        let adj = matrix(&g.snapshot(t), n);
        let mut next = here.clone();
        for u in 0..n {
            if !here[u] {
                continue;
            }
            for v in 0..n {
                if adj[u * n + v] {
                    next[v] = true;
                }
            }
        }
        for v in 0..n {
            if next[v] && last[v].is_none() {
                last[v] = Some(t);
            }
        }
        here = next;
    }
    last
}

pub fn dp_reaches<G: Temporal>(g: &G, from: Vertex, to: Vertex, t0: Time, t1: Time) -> bool {
    from == to || (t0 <= t1 && dp_earliest(g, from, t0, t1)[to as usize].is_some())
}

/// Independent walk check: continuity, strictly increasing times within the
/// lifetime, and every edge present in its snapshot.
pub fn walk_ok<G: Temporal>(g: &G, w: &TemporalWalk) -> bool {
    let n = g.vertex_count();
    let mut at = w.start();
    let mut prev = 0;
    if at as usize >= n {
        return false;
    }
    for s in w.steps() {
        if s.from != at || s.to as usize >= n || s.from == s.to {
            return false;
        }
        if s.time <= prev || s.time > g.lifetime() {
            return false;
        }
        if !active(&g.snapshot(s.time), s.from as usize, s.to as usize) {
            return false;
        }
        prev = s.time;
        at = s.to;
    }
    true
}

pub fn visited(w: &TemporalWalk) -> BTreeSet<Vertex> {
    let mut out = BTreeSet::from([w.start()]);
    out.extend(w.steps().iter().map(|s| s.to));
    out
}

/// All walks valid and every target visited by some walk.
pub fn schedule_ok<G: Temporal>(g: &G, sched: &ExplorationSchedule, targets: &[Vertex]) -> Result<(), String> {
    for (i, w) in sched.walks.iter().enumerate() {
        if !walk_ok(g, w) {
            return Err(format!("walk {i} invalid"));
        }
    }
    let seen: BTreeSet<Vertex> = sched.walks.iter().flat_map(visited).collect();
    let missing: Vec<Vertex> = targets.iter().copied().filter(|v| !seen.contains(v)).collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(format!("uncovered {missing:?}"))
    }
}

/// Maximal cliques of an interval graph by plain Bron-Kerbosch over the
/// pairwise-overlap relation.
pub fn brute_max_cliques<T: Copy + PartialOrd>(iv: &[(T, T)]) -> BTreeSet<Vec<usize>> {
    let n = iv.len();
    let adj = |a: usize, b: usize| a != b && iv[a].0 <= iv[b].1 && iv[b].0 <= iv[a].1;
    let mut out = BTreeSet::new();
    fn bk(
        r: &mut Vec<usize>,
        p: Vec<usize>,
        x: Vec<usize>,
        adj: &dyn Fn(usize, usize) -> bool,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        if p.is_empty() && x.is_empty() {
            let mut c = r.clone();
            c.sort_unstable();
            out.insert(c);
            return;
        }
        let mut p = p;
        let mut x = x;
        while let Some(v) = p.pop() {
            r.push(v);
            let np = p.iter().copied().filter(|&u| adj(u, v)).collect();
            let nx = x.iter().copied().filter(|&u| adj(u, v)).collect();
            bk(r, np, nx, adj, out);
            r.pop();
            x.push(v);
        }
    }
    bk(&mut Vec::new(), (0..n).collect(), Vec::new(), &adj, &mut out);
    out
}

/// Checks the division invariants from scratch: the separator and components
/// partition `V`, components have at most `r` vertices and at most `b`
/// boundary vertices, boundaries are exactly the separator neighbours, no
/// edge joins two components, and the component count is at most
/// `strict * n / r` (at least 1).
pub fn division_ok(g: &StaticGraph, d: &RBDivision, strict: usize) -> Result<(), String> {
    let n = g.n();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut in_sep = vec![false; n];
    for &v in &d.separator {
        if in_sep[v as usize] {
            return Err(format!("separator repeats {v}"));
        }
        in_sep[v as usize] = true;
    }
    for (i, c) in d.components.iter().enumerate() {
        if c.vertices.len() > d.r {
            return Err(format!("component {i} has {} > r = {}", c.vertices.len(), d.r));
        }
        for &v in &c.vertices {
            if in_sep[v as usize] || owner[v as usize].is_some() {
                return Err(format!("vertex {v} assigned twice"));
            }
            owner[v as usize] = Some(i);
        }
    }
    if let Some(v) = (0..n).find(|&v| !in_sep[v] && owner[v].is_none()) {
        return Err(format!("vertex {v} unassigned"));
    }
    for e in g.edges() {
        let (a, b) = (e.lo() as usize, e.hi() as usize);
        if let (Some(x), Some(y)) = (owner[a], owner[b]) {
            if x != y {
                return Err(format!("edge {a}-{b} joins components {x} and {y}"));
            }
        }
    }
    for (i, c) in d.components.iter().enumerate() {
        let mut nb = BTreeSet::new();
        for e in g.edges() {
            let (a, b) = (e.lo() as usize, e.hi() as usize);
            if owner[a] == Some(i) && in_sep[b] {
                nb.insert(b as Vertex);
            }
            if owner[b] == Some(i) && in_sep[a] {
                nb.insert(a as Vertex);
            }
        }
        let declared: BTreeSet<Vertex> = c.boundary.iter().copied().collect();
        if nb != declared {
            return Err(format!("component {i} boundary {declared:?} != {nb:?}"));
        }
        if nb.len() > d.b {
            return Err(format!("component {i} boundary {} > b = {}", nb.len(), d.b));
        }
    }
    let limit = (strict * n / d.r.max(1)).max(1);
    if d.components.len() > limit {
        return Err(format!("{} components > strict limit {limit}", d.components.len()));
    }
    Ok(())
}

/// Random explicit temporal graph: each snapshot keeps each underlying edge
/// with probability `p`.
pub fn random_explicit(rng: &mut impl Rng, n: usize, lifetime: Time, density: f64, p: f64) -> TemporalGraph {
    let mut base = Vec::new();
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            if rng.random_bool(density) {
                base.push((u, v));
            }
        }
    }
    let snaps = (0..lifetime)
        .map(|_| {
            let kept: Vec<(Vertex, Vertex)> = base.iter().copied().filter(|_| rng.random_bool(p)).collect();
            StaticGraph::new(n, kept).unwrap()
        })
        .collect();
    let underlying = StaticGraph::new(n, base).unwrap();
    TemporalGraph::explicit(underlying, snaps, false).unwrap()
}
