//! Experiment runner: generates instances, runs algorithms, checks schedules
//! and compares snapshot counts against the bound formulas.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;

use crate::bounds::BoundFormulas;
use crate::gen::policy::keyed_rng;
use crate::gen::{generate, Family, GeneratorSpec, Instance};
use crate::graph::{average_degree, AnchorSet, Temporal, TemporalGraph, Vertex};
use crate::reductions::{
    explore_rb, explore_rb_single, grid_block_for, grid_division, interval_division, multi_to_single,
    treewidth_division, RBDivision, RbConfig,
};
use crate::strategies::{explore_all, explore_subset, there_and_back};
use crate::walk::{verify_schedule, ExplorationSchedule};
use crate::StrategyError;

type B = BoundFormulas<f64>;

const SUBSET_DOMAIN: u64 = 0x5355_4253;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    ThereAndBack,
    ExploreSubset,
    ExploreAll,
    ExploreRb,
    ExploreRbSingle,
    MultiToSingle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::ThereAndBack,
        Algorithm::ExploreSubset,
        Algorithm::ExploreAll,
        Algorithm::ExploreRb,
        Algorithm::ExploreRbSingle,
        Algorithm::MultiToSingle,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::ThereAndBack => "there-and-back",
            Algorithm::ExploreSubset => "explore-subset",
            Algorithm::ExploreAll => "explore-all",
            Algorithm::ExploreRb => "explore-rb",
            Algorithm::ExploreRbSingle => "explore-rb-single",
            Algorithm::MultiToSingle => "multi-to-single",
        }
    }

    pub fn needs_division(self) -> bool {
        matches!(self, Algorithm::ExploreRb | Algorithm::ExploreRbSingle)
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| format!("unknown algorithm {s:?}"))
    }
}

/// Outcome of one algorithm on one instance.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub spec: GeneratorSpec,
    pub algorithm: Algorithm,
    pub delta: f64,
    pub subset: usize,
    pub snapshots_used: usize,
    pub bound_formula: &'static str,
    pub bound_value: f64,
    pub ratio: f64,
    /// `verify_schedule` accepted the schedule and nothing was left uncovered.
    pub covered: bool,
    pub wallclock_ms: f64,
    pub diagnostics: Vec<String>,
    /// Multi-agent span and agent count for conversions.
    pub conversion: Option<(usize, usize)>,
}

/// Target set of the subset explorer: a seeded half of the vertices.
pub fn bench_subset(spec: &GeneratorSpec) -> Vec<Vertex> {
    let mut rng = keyed_rng(spec.seed, SUBSET_DOMAIN, spec.n as u64);
    let k = spec.n.div_ceil(2).max(1);
    let mut x: Vec<Vertex> = rand::seq::index::sample(&mut rng, spec.n, k)
        .into_iter()
        .map(|v| v as Vertex)
        .collect();
    x.sort_unstable();
    x
}

/// Division for families that come with one.
pub fn family_division(inst: &Instance) -> Result<RBDivision, String> {
    let g = inst.graph.underlying();
    let n = inst.spec.n;
    match inst.spec.family {
        Family::KTree => {
            let td = inst
                .decomposition
                .as_ref()
                .ok_or("k-tree instance lacks a decomposition")?;
            let r = crate::reductions::interval::default_budget(n);
            treewidth_division(g, td, inst.spec.k, r).map_err(|e| e.to_string())
        }
        Family::Interval => {
            let model = inst.intervals.as_ref().ok_or("interval instance lacks a model")?;
            interval_division(model, None).map_err(|e| e.to_string())
        }
        Family::Grid | Family::DeficientGrid => {
            let rows = inst.spec.grid_rows();
            let cols = n / rows;
            Ok(grid_division(rows, cols, grid_block_for(rows, cols)))
        }
        f => Err(format!("family {f} has no division")),
    }
}

fn outcome(
    r: Result<ExplorationSchedule, StrategyError>,
    diagnostics: &mut Vec<String>,
) -> Option<ExplorationSchedule> {
    match r {
        Ok(s) => Some(s),
        Err(StrategyError::LifetimeExhausted { partial, uncovered, .. }) => {
            diagnostics.push(format!("lifetime exhausted with {} uncovered", uncovered.len()));
            Some(*partial)
        }
        Err(e) => {
            diagnostics.push(e.to_string());
            None
        }
    }
}

/// Schedule produced by one algorithm plus its bound.
#[derive(Clone, Debug)]
pub struct Execution {
    pub schedule: Option<ExplorationSchedule>,
    pub subset: usize,
    pub bound_formula: &'static str,
    pub bound_value: f64,
    pub diagnostics: Vec<String>,
    /// Multi-agent span and agent count for conversions.
    pub conversion: Option<(usize, usize)>,
}

/// Runs `algo` on `g` with anchors `s`. `subset` is the target set of the
/// subset algorithms; the division algorithms need `division`.
pub fn execute(
    g: &TemporalGraph,
    s: &AnchorSet,
    algo: Algorithm,
    subset: &[Vertex],
    division: Option<&RBDivision>,
    rb: RbConfig,
) -> Execution {
    let (n, m) = (g.vertex_count(), s.len());
    let d = average_degree(g);
    let delta = *d.numer() as f64 / *d.denom() as f64;
    let mut diagnostics = Vec::new();
    let mut conversion = None;
    let (schedule, subset, formula, bound) = match algo {
        Algorithm::ThereAndBack => {
            let sched = outcome(there_and_back(g, s, subset, 1).map(|r| r.schedule), &mut diagnostics);
            (sched, subset.len(), "2nm|X|", B::there_and_back(n, m, subset.len()))
        }
        Algorithm::ExploreSubset => {
            let sched = outcome(explore_subset(g, s, subset).map(|r| r.schedule), &mut diagnostics);
            let b = B::explore_subset(n, m, delta, subset.len());
            (sched, subset.len(), "n m^3 D^1.5 sqrt(|X| lg(m|X|)) lg|X| + n m^3", b)
        }
        Algorithm::ExploreAll => {
            let sched = outcome(explore_all(g, s).map(|r| r.schedule), &mut diagnostics);
            (
                sched,
                n,
                "n^1.5 m^3 D^1.5 lg^1.5 n + n m^3",
                B::explore_all(n, m, delta),
            )
        }
        Algorithm::MultiToSingle => {
            let run = multi_to_single(g, s.vertices()[0], |x, t| {
                there_and_back(g, s, x, t).map(|r| r.schedule)
            })
            .map(|r| {
                conversion = Some((r.max_runner_span(), m));
                r.schedule
            });
            let sched = outcome(run, &mut diagnostics);
            let t_multi = conversion.map_or(0, |c| c.0);
            (sched, n, "(T_multi + n) k lg n", B::multi_to_single(t_multi, n, m))
        }
        Algorithm::ExploreRb | Algorithm::ExploreRbSingle => match division {
            Some(div) => {
                let b = div.max_boundary().max(1);
                if algo == Algorithm::ExploreRb {
                    let sched = match explore_rb(g, div, rb) {
                        Ok(run) => {
                            diagnostics.extend(run.diagnostics);
                            Some(run.schedule)
                        }
                        Err(e) => outcome(Err(e), &mut diagnostics),
                    };
                    let bound = B::division_multi(n, div.r, b, delta);
                    (sched, n, "n r^0.5 b^3 D^1.5 lg^1.5 r + n^2/r", bound)
                } else {
                    let run = explore_rb_single(g, div, rb).map(|r| {
                        conversion = Some((r.max_runner_span(), r.agents()));
                        r.schedule
                    });
                    let sched = outcome(run, &mut diagnostics);
                    let bound = B::division_single(n, div.r, b, delta);
                    (sched, n, "n r^0.5 b^4 D^1.5 lg^1.5 r lg n + n^2 lg n / r", bound)
                }
            }
            None => {
                diagnostics.push("no division available".into());
                (None, n, "n/a", f64::NAN)
            }
        },
    };
    Execution {
        schedule,
        subset,
        bound_formula: formula,
        bound_value: bound,
        diagnostics,
        conversion,
    }
}

/// Runs `algo` on `inst` and checks the result.
pub fn run_instance(inst: &Instance, algo: Algorithm, rb: RbConfig) -> RunRecord {
    let g = &inst.graph;
    let d = average_degree(g);
    let delta = *d.numer() as f64 / *d.denom() as f64;
    let mut diagnostics = Vec::new();
    let subset = bench_subset(&inst.spec);
    let division = if algo.needs_division() {
        family_division(inst).map_err(|e| diagnostics.push(e)).ok()
    } else {
        None
    };
    let clock = Instant::now();
    let exec = execute(g, &inst.anchors, algo, &subset, division.as_ref(), rb);
    let wallclock_ms = clock.elapsed().as_secs_f64() * 1e3;
    diagnostics.extend(exec.diagnostics);
    let (snapshots_used, covered) = match &exec.schedule {
        Some(sched) => (sched.makespan(), verify_schedule(g, sched).is_valid()),
        None => (0, false),
    };
    let bound = exec.bound_value;
    RunRecord {
        spec: inst.spec.clone(),
        algorithm: algo,
        delta,
        subset: exec.subset,
        snapshots_used,
        bound_formula: exec.bound_formula,
        bound_value: bound,
        ratio: if bound > 0.0 {
            snapshots_used as f64 / bound
        } else {
            f64::INFINITY
        },
        covered,
        wallclock_ms,
        diagnostics,
        conversion: exec.conversion,
    }
}

/// One family swept over sizes, anchor counts and seeds.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub family: String,
    pub n: Vec<usize>,
    #[serde(default = "one")]
    pub m: Vec<usize>,
    pub seeds: Vec<u64>,
    pub lifetime: usize,
    pub algorithms: Vec<String>,
    #[serde(default)]
    pub k: Option<usize>,
}

fn one() -> Vec<usize> {
    vec![1]
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default)]
    pub suite: Vec<SuiteConfig>,
    #[serde(default)]
    pub safety_multiplier: Option<usize>,
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    /// The fixed corpus used by the acceptance tests and `bench --acceptance`.
    pub fn acceptance() -> Self {
        let suite =
            |family: &str, n: Vec<usize>, m: Vec<usize>, seeds: std::ops::Range<u64>, lifetime, algos: &[&str]| {
                SuiteConfig {
                    family: family.into(),
                    n,
                    m,
                    seeds: seeds.collect(),
                    lifetime,
                    algorithms: algos.iter().map(|s| s.to_string()).collect(),
                    k: None,
                }
            };
        BenchConfig {
            suite: vec![
                suite(
                    "s-connected",
                    vec![16, 24, 32],
                    vec![1, 2, 3],
                    1..3,
                    1 << 30,
                    &["explore-subset"],
                ),
                suite("s-connected", vec![16, 32], vec![2], 3..4, 1 << 30, &["explore-subset"]),
                suite(
                    "always-connected",
                    vec![12, 18, 25, 40],
                    vec![1, 2, 3],
                    1..3,
                    1 << 30,
                    &["multi-to-single"],
                ),
                suite(
                    "k-tree",
                    vec![24, 36],
                    vec![1],
                    1..2,
                    1 << 30,
                    &["explore-rb", "explore-rb-single"],
                ),
                suite(
                    "interval",
                    vec![24, 36],
                    vec![1],
                    1..2,
                    1 << 30,
                    &["explore-rb", "explore-rb-single"],
                ),
                suite(
                    "grid",
                    vec![24, 36],
                    vec![1],
                    1..2,
                    1 << 30,
                    &["explore-rb", "explore-rb-single"],
                ),
            ],
            safety_multiplier: None,
        }
    }

    /// Every `(spec, algorithm)` pair, in config order.
    pub fn jobs(&self) -> Result<Vec<(GeneratorSpec, Algorithm)>, String> {
        let mut out = Vec::new();
        for s in &self.suite {
            let family: Family = s.family.parse()?;
            let algos: Vec<Algorithm> = s.algorithms.iter().map(|a| a.parse()).collect::<Result<_, _>>()?;
            for &n in &s.n {
                for &m in &s.m {
                    for &seed in &s.seeds {
                        let mut spec = GeneratorSpec::new(family, n, m, seed, s.lifetime);
                        if let Some(k) = s.k {
                            spec.k = k;
                        }
                        spec.validate()?;
                        for &a in &algos {
                            out.push((spec.clone(), a));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "seed",
    "n",
    "m",
    "delta",
    "|X|",
    "algorithm",
    "snapshots_used",
    "bound_value",
    "ratio",
    "wallclock_ms",
];

/// Runs every job (in parallel) and returns records in a deterministic order.
pub fn run_suite(config: &BenchConfig) -> Result<Vec<RunRecord>, String> {
    let rb = RbConfig {
        safety_multiplier: config
            .safety_multiplier
            .unwrap_or(RbConfig::default().safety_multiplier),
    };
    let jobs = config.jobs()?;
    let mut records: Vec<RunRecord> = jobs
        .par_iter()
        .map(|(spec, algo)| {
            let inst = generate(spec).map_err(|e| format!("{spec}: {e}"))?;
            Ok(run_instance(&inst, *algo, rb))
        })
        .collect::<Result<_, String>>()?;
    records.sort_by(|a, b| {
        (a.spec.family, a.spec.seed, a.spec.n, a.spec.m, a.algorithm).cmp(&(
            b.spec.family,
            b.spec.seed,
            b.spec.n,
            b.spec.m,
            b.algorithm,
        ))
    });
    Ok(records)
}

pub fn csv_string(records: &[RunRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in records {
        w.write_record([
            r.spec.seed.to_string(),
            r.spec.n.to_string(),
            r.spec.m.to_string(),
            format!("{:.4}", r.delta),
            r.subset.to_string(),
            r.algorithm.id().to_string(),
            r.snapshots_used.to_string(),
            format!("{:.3}", r.bound_value),
            format!("{:.6}", r.ratio),
            format!("{:.3}", r.wallclock_ms),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("csv is utf-8")
}

/// Largest ratio per algorithm over covered runs.
pub fn max_ratios(records: &[RunRecord]) -> Vec<(Algorithm, f64)> {
    let mut out: Vec<(Algorithm, f64)> = Vec::new();
    for r in records.iter().filter(|r| r.covered) {
        match out.iter_mut().find(|(a, _)| *a == r.algorithm) {
            Some((_, m)) => *m = m.max(r.ratio),
            None => out.push((r.algorithm, r.ratio)),
        }
    }
    out.sort_by_key(|a| a.0);
    out
}

pub fn summary_string(records: &[RunRecord]) -> String {
    let mut out = String::from("algorithm runs covered max_ratio\n");
    let ratios = max_ratios(records);
    for a in Algorithm::ALL {
        let runs: Vec<&RunRecord> = records.iter().filter(|r| r.algorithm == a).collect();
        if runs.is_empty() {
            continue;
        }
        let covered = runs.iter().filter(|r| r.covered).count();
        let max = ratios.iter().find(|x| x.0 == a).map_or(f64::NAN, |x| x.1);
        let _ = writeln!(out, "{} {} {} {:.6}", a.id(), runs.len(), covered, max);
    }
    out
}

pub fn trace_string(records: &[RunRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let _ = writeln!(
            out,
            "{} | {} | covered={} | bound={} | {}",
            r.spec,
            r.algorithm.id(),
            r.covered,
            r.bound_formula,
            r.diagnostics.join("; ")
        );
    }
    out
}

/// Writes `runs.csv`, `summary.txt` and `trace.txt` into `dir`.
pub fn write_outputs(dir: &Path, records: &[RunRecord]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("runs.csv"), csv_string(records))?;
    std::fs::write(dir.join("summary.txt"), summary_string(records))?;
    std::fs::write(dir.join("trace.txt"), trace_string(records))?;
    Ok(())
}

/// CSV without the wallclock column, for determinism checks.
pub fn strip_wallclock(csv: &str) -> String {
    csv.lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head))
        .collect::<Vec<_>>()
        .join("\n")
}
