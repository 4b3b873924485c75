mod common;

use proptest::prelude::*;

use common::*;
use tempex::gen::{gen_grid, gen_ktree, Family, GeneratorSpec, SnapshotPolicy};
use tempex::reductions::interval::default_budget;
use tempex::reductions::{
    explore_rb, explore_rb_single, grid_division, interval_division, interval_maximal_cliques, multi_to_single,
    treewidth_division, IntervalModel, RbConfig, TreeDecomposition, C_STRICT,
};
use tempex::strategies::there_and_back;
use tempex::{DivisionError, FloatIntervals, Rational, StaticGraph, Temporal, TemporalGraph, Vertex};

fn cliques_sorted<T: Copy + PartialOrd>(m: &IntervalModel<T>) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = interval_maximal_cliques(m)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|v| v as usize).collect();
            c.sort_unstable();
            c
        })
        .collect();
    out.sort();
    out
}

#[test]
fn disjoint_intervals_give_singletons() {
    let m = FloatIntervals::new((0..6).map(|i| (i as f64, i as f64 + 0.5)).collect()).unwrap();
    assert_eq!(cliques_sorted(&m), (0..6).map(|i| vec![i]).collect::<Vec<_>>());
    let d = interval_division(&m, None).unwrap();
    assert_eq!(d.b, 1);
    division_ok(&m.graph(), &d, C_STRICT).unwrap();
}

#[test]
fn nested_intervals_form_one_clique() {
    let m = FloatIntervals::new((0..7).map(|i| (i as f64, 20.0 - i as f64)).collect()).unwrap();
    assert_eq!(cliques_sorted(&m), vec![(0..7).collect::<Vec<_>>()]);
    assert!(matches!(
        interval_division(&m, None),
        Err(DivisionError::CliqueTooLarge { .. })
    ));
}

#[test]
fn uniform_small_cliques_n64() {
    // Pairs of overlapping unit intervals chained by touching endpoints.
    let ivs: Vec<(Rational, Rational)> = (0..64i64)
        .map(|i| (Rational::new(i, 2), Rational::new(i + 1, 2)))
        .collect();
    let m = IntervalModel::new(ivs).unwrap();
    assert_eq!(default_budget(64), 16);
    let d = interval_division(&m, None).unwrap();
    assert!(d.components.iter().all(|c| c.vertices.len() <= 64));
    assert!(d.r <= 4 * 16);
    let chi = cliques_sorted(&m).iter().map(Vec::len).max().unwrap();
    assert!(d.max_boundary() <= 2 * chi);
    division_ok(&m.graph(), &d, C_STRICT).unwrap();
}

#[test]
fn path_in_one_component() {
    let n = 9;
    let path = StaticGraph::new(n, (0..n as Vertex - 1).map(|i| (i, i + 1))).unwrap();
    let bags: Vec<Vec<Vertex>> = (0..n as Vertex - 1).map(|i| vec![i, i + 1]).collect();
    let edges = (0..bags.len() - 1).map(|i| (i, i + 1)).collect();
    let td = TreeDecomposition::new(bags, edges);
    let d = treewidth_division(&path, &td, 1, n).unwrap();
    assert_eq!(d.components.len(), 1);
    assert!(d.separator.is_empty());
}

#[test]
fn ktree_125_with_r_25() {
    let spec = GeneratorSpec::new(Family::KTree, 125, 1, 7, 1);
    let (g, td) = gen_ktree(&spec);
    td.validate(&g).unwrap();
    assert!(td.width() <= 2);
    let d = treewidth_division(&g, &td, 2, default_budget(125)).unwrap();
    assert_eq!(d.r, 25);
    assert!(d
        .components
        .iter()
        .all(|c| c.vertices.len() <= 25 && c.boundary.len() <= 12));
    division_ok(&g, &d, C_STRICT).unwrap();
}

#[test]
fn width_above_declared_is_rejected() {
    let spec = GeneratorSpec::new(Family::KTree, 30, 1, 3, 1);
    let (g, td) = gen_ktree(&spec);
    assert!(matches!(
        treewidth_division(&g, &td, 1, 10),
        Err(DivisionError::WidthExceeded { .. })
    ));
}

#[test]
fn grid_strips() {
    let d = grid_division(4, 9, 2);
    assert_eq!(d.separator.len(), 12);
    assert!(d.components.iter().all(|c| c.vertices.len() <= 2 * 4));
    division_ok(&gen_grid(4, 9), &d, C_STRICT).unwrap();
    let d = grid_division(3, 6, 6);
    assert_eq!(d.components.len(), 2);
    assert!(!d.separator.is_empty());
    division_ok(&gen_grid(3, 6), &d, C_STRICT).unwrap();
}

#[test]
fn rb_needs_a_separator() {
    let n = 6;
    let path = StaticGraph::new(n, (0..n as Vertex - 1).map(|i| (i, i + 1))).unwrap();
    let bags: Vec<Vec<Vertex>> = (0..n as Vertex - 1).map(|i| vec![i, i + 1]).collect();
    let td = TreeDecomposition::new(bags, (0..n - 2).map(|i| (i, i + 1)).collect());
    let d = treewidth_division(&path, &td, 1, n).unwrap();
    let g = TemporalGraph::oracle(path, SnapshotPolicy::Static, 0, 1000).unwrap();
    assert!(explore_rb(&g, &d, RbConfig::default()).is_err());
}

#[test]
fn single_anchor_conversion_takes_one_round() {
    let inst = instance(Family::AlwaysConnected, 10, 1, 2, 1 << 20);
    let s = inst.anchors.clone();
    let run = multi_to_single(&inst.graph, s.vertices()[0], |x, t| {
        there_and_back(&inst.graph, &s, x, t).map(|r| r.schedule)
    })
    .unwrap();
    assert_eq!(run.agents(), 1);
    let all: Vec<Vertex> = (0..10).collect();
    schedule_ok(&inst.graph, &run.schedule, &all).unwrap();
}

#[test]
fn rb_phases_stay_inside_their_regions() {
    let grid = gen_grid(2, 7);
    let g = TemporalGraph::oracle(grid, SnapshotPolicy::Static, 0, 1 << 20).unwrap();
    let d = grid_division(2, 7, 2);
    let run = explore_rb(&g, &d, RbConfig::default()).unwrap();
    let all: Vec<Vertex> = (0..14).collect();
    schedule_ok(&g, &run.schedule, &all).unwrap();
    for p in &run.phases {
        for w in &run.schedule.walks {
            for s in w.steps().iter().filter(|s| s.time >= p.start && s.time <= p.end) {
                assert!(p.vertices.contains(&s.from) && p.vertices.contains(&s.to));
            }
        }
    }
    let single = explore_rb_single(&g, &d, RbConfig::default()).unwrap();
    assert_eq!(single.schedule.walks.len(), 1);
    schedule_ok(&g, &single.schedule, &all).unwrap();
}

#[test]
fn rb_handles_non_s_connected_regions() {
    // Grid snapshots that drop edges can disconnect a strip from its
    // boundary; the sweep must still cover everything.
    let inst = instance(Family::Grid, 30, 1, 11, 1 << 30);
    let d = tempex::bench::family_division(&inst).unwrap();
    let run = explore_rb(&inst.graph, &d, RbConfig { safety_multiplier: 1 }).unwrap();
    let all: Vec<Vertex> = (0..30).collect();
    schedule_ok(&inst.graph, &run.schedule, &all).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sweep_matches_bron_kerbosch(raw in prop::collection::vec((0i64..60, 0i64..15), 1..=20)) {
        let ivs: Vec<(Rational, Rational)> = raw.iter().map(|&(a, l)| (Rational::new(a, 3), Rational::new(a + l, 3))).collect();
        let m = IntervalModel::new(ivs.clone()).unwrap();
        let fast = cliques_sorted(&m);
        prop_assert!(fast.len() <= ivs.len());
        let brute: Vec<Vec<usize>> = brute_max_cliques(&ivs).into_iter().collect();
        prop_assert_eq!(fast, brute);
    }

    #[test]
    fn interval_divisions_valid(seed in 0u64..10_000, n in 8usize..120) {
        let inst = instance(Family::Interval, n, 1, seed, 1);
        let d = interval_division(inst.intervals.as_ref().unwrap(), None).unwrap();
        prop_assert!(division_ok(inst.graph.underlying(), &d, C_STRICT).is_ok());
        prop_assert!(d.validate(inst.graph.underlying()).is_ok());
    }

    #[test]
    fn treewidth_divisions_valid(seed in 0u64..10_000, n in 3usize..150, k in 1usize..4, r in 2usize..40) {
        let mut spec = GeneratorSpec::new(Family::KTree, n, 1, seed, 1);
        spec.k = k;
        let (g, td) = gen_ktree(&spec);
        prop_assert!(td.validate(&g).is_ok());
        let d = treewidth_division(&g, &td, k, r.max(k + 1)).unwrap();
        prop_assert!(division_ok(&g, &d, C_STRICT).is_ok(), "{:?}", division_ok(&g, &d, C_STRICT));
        prop_assert!(d.b <= 6 * k);
    }

    #[test]
    fn grid_divisions_valid(rows in 1usize..10, cols in 1usize..16, block in 1usize..16) {
        let block = block.min(cols);
        let d = grid_division(rows, cols, block);
        prop_assert!(division_ok(&gen_grid(rows, cols), &d, C_STRICT).is_ok(), "{:?}", division_ok(&gen_grid(rows, cols), &d, C_STRICT));
    }
}

#[test]
fn division_checker_rejects_bad_boundary() {
    let g = gen_grid(2, 5);
    let mut d = grid_division(2, 5, 2);
    d.components[0].boundary.pop();
    assert!(division_ok(&g, &d, C_STRICT).is_err());
    assert!(d.validate(&g).is_err());
}
