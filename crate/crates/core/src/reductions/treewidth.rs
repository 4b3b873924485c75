//! Divisions of graphs with a known tree decomposition.

use super::{components_within, membership, RBDivision};
use crate::error::DivisionError;
use crate::graph::{StaticGraph, Vertex};

/// Bags joined by tree edges. Bags are sorted vertex lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<Vertex>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(mut bags: Vec<Vec<Vertex>>, edges: Vec<(usize, usize)>) -> Self {
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        TreeDecomposition { bags, edges }
    }

    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    /// Checks that the bag graph is a tree, every vertex and edge of `g` lies
    /// in a bag, and each vertex's bags are connected.
    pub fn validate(&self, g: &StaticGraph) -> Result<(), DivisionError> {
        let bad = |s: String| Err(DivisionError::InvalidDecomposition(s));
        let nb = self.bags.len();
        if nb == 0 {
            return if g.n() == 0 { Ok(()) } else { bad("no bags".into()) };
        }
        if self.edges.len() + 1 != nb {
            return bad(format!("{} tree edges for {nb} bags", self.edges.len()));
        }
        let mut adj = vec![Vec::new(); nb];
        for &(a, b) in &self.edges {
            if a >= nb || b >= nb || a == b {
                return bad(format!("bad tree edge {a} {b}"));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        if reach_from(0, &adj, |_| true).len() != nb {
            return bad("bag graph is not connected".into());
        }
        let n = g.n();
        let mut holders = vec![Vec::new(); n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v as usize >= n {
                    return bad(format!("bag {i} holds vertex {v} out of range"));
                }
                holders[v as usize].push(i);
            }
        }
        for (v, hs) in holders.iter().enumerate() {
            if hs.is_empty() {
                return bad(format!("vertex {v} in no bag"));
            }
            let mine = membership(nb, &hs.iter().map(|&h| h as Vertex).collect::<Vec<_>>());
            if reach_from(hs[0], &adj, |b| mine[b]).len() != hs.len() {
                return bad(format!("bags of vertex {v} are not connected"));
            }
        }
        for e in g.edges() {
            let covered = holders[e.lo() as usize]
                .iter()
                .any(|&i| self.bags[i].binary_search(&e.hi()).is_ok());
            if !covered {
                return bad(format!("edge {} {} in no bag", e.lo(), e.hi()));
            }
        }
        Ok(())
    }
}

fn reach_from(start: usize, adj: &[Vec<usize>], allow: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut out = vec![start];
    let mut i = 0;
    while i < out.len() {
        let a = out[i];
        i += 1;
        for &b in &adj[a] {
            if !seen[b] && allow(b) {
                seen[b] = true;
                out.push(b);
            }
        }
    }
    out
}

/// Bag (restricted to `region`) whose removal from `g[region]` minimizes the
/// heaviest remaining component; `weight` counts the vertices that matter.
fn best_bag(g: &StaticGraph, td: &TreeDecomposition, region: &[Vertex], weight: &[bool]) -> (Vec<Vertex>, usize) {
    let inside = membership(g.n(), region);
    let mut best: Option<(Vec<Vertex>, usize)> = None;
    for bag in &td.bags {
        let cut: Vec<Vertex> = bag.iter().copied().filter(|&v| inside[v as usize]).collect();
        if cut.is_empty() {
            continue;
        }
        let cut_set = membership(g.n(), &cut);
        let rest: Vec<Vertex> = region.iter().copied().filter(|&v| !cut_set[v as usize]).collect();
        let heaviest = components_within(g, &rest)
            .iter()
            .map(|c| c.iter().filter(|&&v| weight[v as usize]).count())
            .max()
            .unwrap_or(0);
        if best.as_ref().is_none_or(|b| heaviest < b.1) {
            best = Some((cut, heaviest));
        }
    }
    best.unwrap_or((Vec::new(), usize::MAX))
}

/// Strict `(r, 6k)`-division from a width-`k` decomposition.
///
/// Pieces larger than `r` are split at a bag balancing their size; pieces
/// with more than `6k` boundary vertices are split at a bag balancing the
/// boundary. Split vertices join the separator. Finally pieces are merged
/// first-fit while size and boundary bounds allow.
pub fn treewidth_division(
    g: &StaticGraph,
    td: &TreeDecomposition,
    k: usize,
    r: usize,
) -> Result<RBDivision, DivisionError> {
    td.validate(g)?;
    if td.width() > k {
        return Err(DivisionError::WidthExceeded {
            width: td.width(),
            declared: k,
        });
    }
    let n = g.n();
    let r = r.max(1);
    let b = 6 * k.max(1);
    let mut in_sep = vec![false; n];
    let all: Vec<Vertex> = (0..n as Vertex).collect();
    let mut stack = components_within(g, &all);
    let mut settled = Vec::new();
    let boundary_of = |piece: &[Vertex], in_sep: &[bool]| -> Vec<Vertex> {
        let mut bd: Vec<Vertex> = piece
            .iter()
            .flat_map(|&v| g.neighbors(v).iter().copied())
            .filter(|&u| in_sep[u as usize])
            .collect();
        bd.sort_unstable();
        bd.dedup();
        bd
    };
    while let Some(piece) = stack.pop() {
        let bd = boundary_of(&piece, &in_sep);
        let cut = if piece.len() > r {
            let weight = membership(n, &piece);
            best_bag(g, td, &piece, &weight).0
        } else if bd.len() > b {
            let mut region = piece.clone();
            region.extend(&bd);
            region.sort_unstable();
            let weight = membership(n, &bd);
            let (bag, _) = best_bag(g, td, &region, &weight);
            let piece_set = membership(n, &piece);
            bag.into_iter().filter(|&v| piece_set[v as usize]).collect()
        } else {
            // cuts inside other pieces never touch this one
            settled.push((piece, bd));
            continue;
        };
        if cut.is_empty() {
            return Err(DivisionError::Stuck(piece.len()));
        }
        for &v in &cut {
            in_sep[v as usize] = true;
        }
        let rest: Vec<Vertex> = piece.iter().copied().filter(|&v| !in_sep[v as usize]).collect();
        stack.extend(components_within(g, &rest));
    }

    settled.sort_unstable_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    let mut groups: Vec<(Vec<Vertex>, Vec<Vertex>)> = Vec::new();
    for (piece, bd) in settled {
        let fit = groups
            .iter_mut()
            .find(|(gv, gb)| gv.len() + piece.len() <= r && union_len(gb, &bd) <= b);
        match fit {
            Some((gv, gb)) => {
                gv.extend(&piece);
                let mut merged = gb.clone();
                merged.extend(&bd);
                merged.sort_unstable();
                merged.dedup();
                *gb = merged;
            }
            None => groups.push((piece, bd)),
        }
    }
    let separator: Vec<Vertex> = (0..n as Vertex).filter(|&v| in_sep[v as usize]).collect();
    let div = RBDivision::from_groups(g, r, b, separator, groups.into_iter().map(|(v, _)| v).collect());
    div.validate(g).map_err(DivisionError::Invalid)?;
    Ok(div)
}

fn union_len(a: &[Vertex], b: &[Vertex]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() || j < b.len() {
        count += 1;
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => i += 1,
            (Some(_), None) => i += 1,
            _ => j += 1,
        }
    }
    count
}
