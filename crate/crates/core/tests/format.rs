mod common;

use proptest::prelude::*;

use common::{random_explicit, rng, subset};
use tempex::format::{parse_division, parse_graph, parse_schedule, write_division, write_graph, write_schedule};
use tempex::gen::{Family, GeneratorSpec};
use tempex::reductions::grid_division;
use tempex::walk::Step;
use tempex::{AnchorSet, ExplorationSchedule, ParseError, Temporal, TemporalWalk};

fn line_of(e: ParseError) -> usize {
    e.line
}

#[test]
fn spec_record_survives_round_trip() {
    let spec = GeneratorSpec::new(Family::Interval, 20, 2, 13, 50);
    let inst = tempex::gen::generate(&spec).unwrap();
    let text = write_graph(&inst.graph, Some(&inst.anchors), Some(&inst.spec));
    assert!(text.contains("# spec family=interval"));
    let back = parse_graph(&text).unwrap();
    assert_eq!(back.spec, Some(spec));
    assert_eq!(back.anchors.as_ref(), Some(&inst.anchors));
    assert_eq!(back.graph, inst.graph);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let bad_header = "tempex v2\nn 2 T 1\n";
    assert_eq!(line_of(parse_graph(bad_header).unwrap_err()), 1);

    let bad_edge = "tempex v1\n\nn 3 T 1\nunderlying 2\n0 1\n1 x\nsnapshot 1 0\n";
    assert_eq!(line_of(parse_graph(bad_edge).unwrap_err()), 6);

    let off_underlying = "tempex v1\nn 3 T 1\nunderlying 1\n0 1\nsnapshot 1 1\n1 2\n";
    assert_eq!(line_of(parse_graph(off_underlying).unwrap_err()), 5);

    let gap = "tempex v1\nn 2 T 2\nunderlying 1\n0 1\nsnapshot 2 0\n";
    assert_eq!(line_of(parse_graph(gap).unwrap_err()), 5);

    let out_of_range = "tempex v1\nn 2 T 1\nunderlying 1\n0 5\n";
    assert_eq!(line_of(parse_graph(out_of_range).unwrap_err()), 4);

    let short_schedule = "tempex-schedule v1\ntarget 0\nwalks 1\nwalk 0 2\n0 1 1\n";
    assert_eq!(line_of(parse_schedule(short_schedule).unwrap_err()), 6);
}

#[test]
fn default_empty_omits_edgeless_snapshots() {
    let text = "tempex v1\nn 3 T 4 default-empty\nunderlying 1\n0 1\nsnapshot 3 1\n0 1\n";
    let g = parse_graph(text).unwrap().graph;
    assert_eq!(g.lifetime(), 4);
    assert_eq!(g.snapshot(1).edge_count(), 0);
    assert_eq!(g.snapshot(3).edge_count(), 1);
    assert_eq!(parse_graph(&write_graph(&g, None, None)).unwrap().graph, g);
}

#[test]
fn division_round_trip() {
    let d = grid_division(3, 8, 2);
    assert_eq!(parse_division(&write_division(&d)).unwrap(), d);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn explicit_graphs_round_trip(seed in any::<u64>(), n in 1usize..10, t in 1usize..12, m in 0usize..4) {
        let mut r = rng(seed);
        let g = random_explicit(&mut r, n, t, 0.5, 0.5);
        let k = m.min(n);
        let anchors = (k > 0).then(|| AnchorSet::new(subset(&mut r, n, k)).unwrap());
        let text = write_graph(&g, anchors.as_ref(), None);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back.graph, &g);
        prop_assert_eq!(back.anchors, anchors);
        for s in 1..=t {
            prop_assert_eq!(back.graph.snapshot(s), g.snapshot(s));
        }
    }

    #[test]
    fn oracle_graphs_round_trip(seed in 0u64..1000, pick in 0usize..6) {
        let family = Family::ALL[pick];
        let inst = tempex::gen::generate(&GeneratorSpec::new(family, 16, 2, seed, 20)).unwrap();
        let back = parse_graph(&write_graph(&inst.graph, Some(&inst.anchors), None)).unwrap();
        for t in 1..=20 {
            prop_assert_eq!(back.graph.snapshot(t), inst.graph.snapshot(t));
        }
    }

    #[test]
    fn schedules_round_trip(raw in prop::collection::vec((0u32..20, prop::collection::vec((0u32..20, 1usize..5), 0..8)), 0..5)) {
        let walks: Vec<TemporalWalk> = raw
            .iter()
            .map(|(start, hops)| {
                let mut at = *start;
                let mut time = 0;
                let steps = hops
                    .iter()
                    .map(|&(to, dt)| {
                        time += dt;
                        let s = Step { from: at, to, time };
                        at = to;
                        s
                    })
                    .collect();
                TemporalWalk::from_steps(*start, steps)
            })
            .collect();
        let sched = ExplorationSchedule::new(walks, vec![1, 4, 7]);
        prop_assert_eq!(parse_schedule(&write_schedule(&sched)).unwrap(), sched);
    }
}
