//! Single-agent conversion, division-based exploration and division
//! constructions.

mod convert;
mod grid;
pub mod interval;
mod rb;
mod treewidth;

pub use convert::{multi_to_single, ConversionRound, SingleRun};
pub use grid::{grid_block_for, grid_division};
pub use interval::{interval_division, interval_maximal_cliques, IntervalModel};
pub use rb::{explore_rb, explore_rb_from, explore_rb_single, RbConfig, RbPhase, RbRun};
pub use treewidth::{treewidth_division, TreeDecomposition};

use crate::error::DivisionViolation;
use crate::graph::{StaticGraph, Vertex};

/// Strictness constant: a division is strict when it has at most
/// `C_STRICT * n / r` components.
pub const C_STRICT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionComponent {
    pub vertices: Vec<Vertex>,
    /// Separator vertices adjacent to the component.
    pub boundary: Vec<Vertex>,
}

/// An `(r, b)`-division: a separator plus components of at most `r` vertices,
/// each adjacent to at most `b` separator vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RBDivision {
    pub r: usize,
    pub b: usize,
    pub separator: Vec<Vertex>,
    pub components: Vec<DivisionComponent>,
}

impl RBDivision {
    /// Builds a division from a separator and a grouping of the remaining
    /// vertices; boundaries are derived from `g`.
    pub fn from_groups(
        g: &StaticGraph,
        r: usize,
        b: usize,
        mut separator: Vec<Vertex>,
        groups: Vec<Vec<Vertex>>,
    ) -> Self {
        separator.sort_unstable();
        separator.dedup();
        let in_sep = membership(g.n(), &separator);
        let components = groups
            .into_iter()
            .filter(|c| !c.is_empty())
            .map(|mut vertices| {
                vertices.sort_unstable();
                let mut boundary: Vec<Vertex> = vertices
                    .iter()
                    .flat_map(|&v| g.neighbors(v).iter().copied())
                    .filter(|&u| in_sep[u as usize])
                    .collect();
                boundary.sort_unstable();
                boundary.dedup();
                DivisionComponent { vertices, boundary }
            })
            .collect();
        RBDivision {
            r,
            b,
            separator,
            components,
        }
    }

    /// Largest boundary over all components.
    pub fn max_boundary(&self) -> usize {
        self.components.iter().map(|c| c.boundary.len()).max().unwrap_or(0)
    }

    pub fn strict_limit(&self, n: usize) -> usize {
        C_STRICT * n / self.r.max(1)
    }

    /// Checks the partition, the size and boundary bounds, that no edge joins
    /// two components, and strictness.
    pub fn validate(&self, g: &StaticGraph) -> Result<(), DivisionViolation> {
        let n = g.n();
        let mut owner: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut mark = |v: Vertex| -> Result<(), DivisionViolation> {
            if v as usize >= n || seen[v as usize] {
                return Err(DivisionViolation::NotPartition(v));
            }
            seen[v as usize] = true;
            Ok(())
        };
        for &v in &self.separator {
            mark(v)?;
        }
        for (i, c) in self.components.iter().enumerate() {
            for &v in &c.vertices {
                mark(v)?;
                owner[v as usize] = Some(i);
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(DivisionViolation::NotPartition(v as Vertex));
        }
        let in_sep = membership(n, &self.separator);
        for (i, c) in self.components.iter().enumerate() {
            if c.vertices.len() > self.r {
                return Err(DivisionViolation::ComponentTooLarge {
                    component: i,
                    size: c.vertices.len(),
                    r: self.r,
                });
            }
            let mut expect: Vec<Vertex> = c
                .vertices
                .iter()
                .flat_map(|&v| g.neighbors(v).iter().copied())
                .filter(|&u| in_sep[u as usize])
                .collect();
            expect.sort_unstable();
            expect.dedup();
            let mut have = c.boundary.clone();
            have.sort_unstable();
            if have != expect {
                return Err(DivisionViolation::BoundaryMismatch { component: i });
            }
            if have.len() > self.b {
                return Err(DivisionViolation::BoundaryTooLarge {
                    component: i,
                    size: have.len(),
                    b: self.b,
                });
            }
        }
        for e in g.edges() {
            if let (Some(a), Some(b)) = (owner[e.lo() as usize], owner[e.hi() as usize]) {
                if a != b {
                    return Err(DivisionViolation::StrayEdge { u: e.lo(), v: e.hi() });
                }
            }
        }
        let limit = self.strict_limit(n);
        if self.components.len() > limit.max(1) {
            return Err(DivisionViolation::NotStrict {
                components: self.components.len(),
                limit,
            });
        }
        Ok(())
    }
}

pub(crate) fn membership(n: usize, vs: &[Vertex]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in vs {
        m[v as usize] = true;
    }
    m
}

/// Connected components of `g` restricted to `keep`, each sorted.
pub(crate) fn components_within(g: &StaticGraph, keep: &[Vertex]) -> Vec<Vec<Vertex>> {
    let inside = membership(g.n(), keep);
    let mut done = vec![false; g.n()];
    let mut out = Vec::new();
    for &s in keep {
        if done[s as usize] {
            continue;
        }
        done[s as usize] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &u in g.neighbors(v) {
                if inside[u as usize] && !done[u as usize] {
                    done[u as usize] = true;
                    comp.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}
