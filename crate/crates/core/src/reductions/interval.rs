//! Interval models, their maximal cliques and divisions.

use std::cmp::Ordering;

use super::RBDivision;
use crate::error::DivisionError;
use crate::graph::{Edge, StaticGraph, Vertex};

/// Closed interval `[l, r]` per vertex. `T` is the endpoint type, exact
/// rationals in generated instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalModel<T> {
    intervals: Vec<(T, T)>,
}

fn cmp<T: PartialOrd>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).expect("interval endpoints are totally ordered")
}

impl<T: Copy + PartialOrd> IntervalModel<T> {
    pub fn new(intervals: Vec<(T, T)>) -> Result<Self, String> {
        if let Some(v) = intervals
            .iter()
            .position(|(l, r)| l.partial_cmp(r).is_none_or(|o| o == Ordering::Greater))
        {
            return Err(format!("interval of vertex {v} is empty or unordered"));
        }
        Ok(IntervalModel { intervals })
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn interval(&self, v: Vertex) -> (T, T) {
        self.intervals[v as usize]
    }

    pub fn overlaps(&self, a: Vertex, b: Vertex) -> bool {
        let (la, ra) = self.interval(a);
        let (lb, rb) = self.interval(b);
        la <= rb && lb <= ra
    }

    /// Vertices by left endpoint, ties by id.
    pub fn order(&self) -> Vec<Vertex> {
        let mut order: Vec<Vertex> = (0..self.len() as Vertex).collect();
        order.sort_by(|&a, &b| cmp(&self.intervals[a as usize].0, &self.intervals[b as usize].0).then(a.cmp(&b)));
        order
    }

    /// The intersection graph.
    pub fn graph(&self) -> StaticGraph {
        let order = self.order();
        let mut edges = Vec::new();
        for (i, &a) in order.iter().enumerate() {
            let ra = self.intervals[a as usize].1;
            for &b in &order[i + 1..] {
                if self.intervals[b as usize].0 > ra {
                    break;
                }
                edges.push(Edge::new(a, b));
            }
        }
        edges.sort_unstable();
        StaticGraph::from_sorted_unique(self.len(), edges)
    }
}

/// All maximal cliques, each sorted, in sweep order.
///
/// Sweeps endpoints left to right (starts before ends at ties). The active
/// set right before the first end following a start is a maximal clique.
pub fn interval_maximal_cliques<T: Copy + PartialOrd>(model: &IntervalModel<T>) -> Vec<Vec<Vertex>> {
    let mut events: Vec<(T, u8, Vertex)> = Vec::with_capacity(2 * model.len());
    for v in 0..model.len() as Vertex {
        let (l, r) = model.interval(v);
        events.push((l, 0, v));
        events.push((r, 1, v));
    }
    events.sort_by(|a, b| cmp(&a.0, &b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut active = std::collections::BTreeSet::new();
    let mut grown = false;
    let mut out = Vec::new();
    for (_, kind, v) in events {
        if kind == 0 {
            active.insert(v);
            grown = true;
        } else {
            if grown {
                out.push(active.iter().copied().collect());
                grown = false;
            }
            active.remove(&v);
        }
    }
    out
}

/// `ceil(n^(2/3))`, exactly.
pub fn default_budget(n: usize) -> usize {
    let n2 = (n as u128) * (n as u128);
    let mut b = (n as f64).powf(2.0 / 3.0).floor() as u128;
    while b * b * b < n2 {
        b += 1;
    }
    while b > 0 && (b - 1).pow(3) >= n2 {
        b -= 1;
    }
    b as usize
}

/// Division by cutting the left-endpoint order at small cliques.
///
/// With clique sizes `χ_1 >= χ_2 >= ...` and `k` the largest index with
/// `χ_1 + ... + χ_k <= n^(2/3)`, a cut is made after position `j` once the
/// current piece spans `budget` positions and the intervals crossing into
/// position `j + 1` number at most `χ_k`; those intervals join the
/// separator. Components have at most `r = 4 budget` vertices; interior
/// pieces touch two cuts, so `b` is `χ_k` when every boundary fits and
/// `2 χ_k` otherwise.
pub fn interval_division<T: Copy + PartialOrd>(
    model: &IntervalModel<T>,
    budget: Option<usize>,
) -> Result<RBDivision, DivisionError> {
    let n = model.len();
    let g = model.graph();
    let budget = budget.unwrap_or_else(|| default_budget(n)).max(1);
    let mut sizes: Vec<usize> = interval_maximal_cliques(model).iter().map(Vec::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let largest = sizes.first().copied().unwrap_or(0);
    if largest >= budget {
        return Err(DivisionError::CliqueTooLarge { largest, budget });
    }
    let n2 = (n as u128).pow(2);
    let mut sum = 0u128;
    let mut k = 0;
    for &s in &sizes {
        sum += s as u128;
        if sum.pow(3) > n2 {
            break;
        }
        k += 1;
    }
    let chi_k = sizes.get(k.max(1) - 1).copied().unwrap_or(1).max(1);

    let order = model.order();
    let mut in_sep = vec![false; n];
    let mut segment = vec![0usize; n];
    let mut seg = 0;
    let mut piece_start = 0;
    for j in 0..n {
        segment[order[j] as usize] = seg;
        if j + 1 == n || j + 1 - piece_start < budget {
            continue;
        }
        let next_left = model.interval(order[j + 1]).0;
        let cross: Vec<Vertex> = order[..=j]
            .iter()
            .copied()
            .filter(|&v| model.interval(v).1 >= next_left)
            .collect();
        if cross.len() <= chi_k {
            for v in cross {
                in_sep[v as usize] = true;
            }
            seg += 1;
            piece_start = j + 1;
        }
    }
    let mut groups = vec![Vec::new(); seg + 1];
    for v in 0..n {
        if !in_sep[v] {
            groups[segment[v]].push(v as Vertex);
        }
    }
    let separator: Vec<Vertex> = (0..n as Vertex).filter(|&v| in_sep[v as usize]).collect();
    let mut div = RBDivision::from_groups(&g, 4 * budget, chi_k, separator, groups);
    if div.max_boundary() > chi_k {
        div.b = 2 * chi_k;
    }
    div.validate(&g).map_err(DivisionError::Invalid)?;
    Ok(div)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn model(iv: &[(i64, i64)]) -> IntervalModel<Rational> {
        IntervalModel::new(
            iv.iter()
                .map(|&(l, r)| (Rational::from(l), Rational::from(r)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn disjoint_intervals() {
        let m = model(&(0..10).map(|i| (3 * i, 3 * i + 1)).collect::<Vec<_>>());
        assert_eq!(interval_maximal_cliques(&m).len(), 10);
        let d = interval_division(&m, None).unwrap();
        assert!(d.separator.is_empty());
        assert_eq!(d.b, 1);
    }

    #[test]
    fn nested_intervals_one_clique() {
        let m = model(&(0..6).map(|i| (i, 20 - i)).collect::<Vec<_>>());
        assert_eq!(interval_maximal_cliques(&m), vec![vec![0, 1, 2, 3, 4, 5]]);
        assert!(matches!(
            interval_division(&m, None),
            Err(DivisionError::CliqueTooLarge { largest: 6, .. })
        ));
    }

    #[test]
    fn touching_endpoints_overlap() {
        let m = model(&[(0, 1), (1, 2), (2, 3)]);
        assert!(m.graph().has_edge(0, 1) && !m.graph().has_edge(0, 2));
        assert_eq!(interval_maximal_cliques(&m), vec![vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn budget_is_exact() {
        assert_eq!(default_budget(64), 16);
        assert_eq!(default_budget(125), 25);
        assert_eq!(default_budget(10), 5);
        assert_eq!(default_budget(1), 1);
    }

    #[test]
    fn float_endpoints() {
        let m = IntervalModel::new(vec![(0.0, 1.5), (1.0, 2.0), (2.5, 3.0)]).unwrap();
        assert_eq!(interval_maximal_cliques(&m).len(), 2);
        assert!(IntervalModel::new(vec![(1.0, 0.0)]).is_err());
    }
}
