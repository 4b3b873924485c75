use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use tempex::bench::{self, Algorithm, BenchConfig, SuiteConfig};
use tempex::format::{self, GraphFile};
use tempex::gen::{generate, Family, GeneratorSpec, Instance};
use tempex::reductions::{grid_division, interval_division, treewidth_division, RBDivision, RbConfig};
use tempex::{verify_schedule, Temporal, Vertex};

#[derive(Parser)]
#[command(
    name = "tempex",
    version,
    about = "Exploration schedules for always S-connected temporal graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GenArgs {
    #[arg(long, default_value = "s-connected")]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    lifetime: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance and write it as a graph file.
    Gen {
        #[command(flatten)]
        spec: GenArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an algorithm on a graph file and write the schedule.
    Explore {
        graph: PathBuf,
        #[arg(long, default_value = "explore-all")]
        algo: Algorithm,
        /// Comma-separated target vertices for the subset algorithms.
        #[arg(long, value_delimiter = ',')]
        targets: Option<Vec<Vertex>>,
        /// Division file for the division algorithms.
        #[arg(long)]
        division: Option<PathBuf>,
        #[arg(long, default_value_t = RbConfig::default().safety_multiplier)]
        safety_multiplier: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a schedule against a graph file.
    Verify { graph: PathBuf, schedule: PathBuf },
    /// Compute an (r, b)-division for a generated graph file.
    Divide {
        graph: PathBuf,
        /// Clique budget (interval), component size r (k-tree) or strip
        /// width (grid).
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark suite and write runs.csv, summary.txt and trace.txt.
    Bench {
        /// TOML suite file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Use the built-in acceptance corpus.
        #[arg(long)]
        acceptance: bool,
        #[arg(long)]
        family: Option<Family>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        lifetime: Option<usize>,
        #[arg(long)]
        algo: Option<Algorithm>,
        #[arg(long)]
        safety_multiplier: Option<usize>,
        #[arg(long, default_value = "bench-out")]
        out: PathBuf,
    },
    /// Per-snapshot agent positions of a schedule, one line per snapshot.
    Trace {
        graph: PathBuf,
        schedule: PathBuf,
        /// Stop after this many snapshots.
        #[arg(long, default_value_t = 10_000)]
        max_snapshots: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failures that map to exit code 1 rather than 2.
#[derive(Debug)]
struct VerificationFailed(String);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for VerificationFailed {}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<GraphFile> {
    format::load(path).with_context(|| format!("reading {}", path.display()))
}

fn load_schedule(path: &Path) -> Result<tempex::ExplorationSchedule> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    format::parse_schedule(&text).with_context(|| format!("parsing {}", path.display()))
}

fn regenerate(file: &GraphFile) -> Result<Instance> {
    let spec = file
        .spec
        .as_ref()
        .ok_or_else(|| anyhow!("graph file carries no generator record"))?;
    Ok(generate(spec)?)
}

fn divide(inst: &Instance, budget: Option<usize>) -> Result<RBDivision> {
    match (inst.spec.family, budget) {
        (Family::Interval, Some(b)) => {
            let model = inst.intervals.as_ref().expect("interval instance has a model");
            Ok(interval_division(model, Some(b))?)
        }
        (Family::KTree, Some(r)) => {
            let td = inst
                .decomposition
                .as_ref()
                .expect("k-tree instance has a decomposition");
            Ok(treewidth_division(inst.graph.underlying(), td, inst.spec.k, r)?)
        }
        (Family::Grid | Family::DeficientGrid, Some(w)) => {
            let rows = inst.spec.grid_rows();
            Ok(grid_division(rows, inst.spec.n / rows, w))
        }
        _ => bench::family_division(inst).map_err(|e| anyhow!(e)),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { spec, out } => {
            let spec = GeneratorSpec::new(spec.family, spec.n, spec.m, spec.seed, spec.lifetime);
            spec.validate().map_err(|e| anyhow!(e))?;
            let inst = generate(&spec)?;
            emit(
                out.as_deref(),
                &format::write_graph(&inst.graph, Some(&inst.anchors), Some(&spec)),
            )
        }
        Command::Explore {
            graph,
            algo,
            targets,
            division,
            safety_multiplier,
            out,
        } => {
            let file = load_graph(&graph)?;
            let anchors = file
                .anchors
                .clone()
                .ok_or_else(|| anyhow!("graph file has no anchors section"))?;
            let subset = match (targets, &file.spec) {
                (Some(t), _) => t,
                (None, Some(spec)) => bench::bench_subset(spec),
                (None, None) => (0..file.graph.vertex_count() as Vertex).collect(),
            };
            let div = if algo.needs_division() {
                Some(match division {
                    Some(p) => {
                        let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                        format::parse_division(&text)?
                    }
                    None => divide(&regenerate(&file)?, None)?,
                })
            } else {
                None
            };
            let rb = RbConfig { safety_multiplier };
            let exec = bench::execute(&file.graph, &anchors, algo, &subset, div.as_ref(), rb);
            for d in &exec.diagnostics {
                eprintln!("note: {d}");
            }
            let sched = exec
                .schedule
                .ok_or_else(|| anyhow!("{} produced no schedule", algo.id()))?;
            eprintln!(
                "{}: {} snapshots, bound {:.3}",
                algo.id(),
                sched.makespan(),
                exec.bound_value
            );
            emit(out.as_deref(), &format::write_schedule(&sched))
        }
        Command::Verify { graph, schedule } => {
            let file = load_graph(&graph)?;
            let sched = load_schedule(&schedule)?;
            let report = verify_schedule(&file.graph, &sched);
            if let Some(v) = report.violation {
                return Err(VerificationFailed(format!("invalid: {v}")).into());
            }
            if !report.uncovered.is_empty() {
                return Err(VerificationFailed(format!("uncovered: {:?}", report.uncovered)).into());
            }
            println!("valid: {} walks, makespan {}", sched.walks.len(), sched.makespan());
            Ok(())
        }
        Command::Divide { graph, budget, out } => {
            let inst = regenerate(&load_graph(&graph)?)?;
            let div = divide(&inst, budget)?;
            div.validate(inst.graph.underlying())
                .map_err(|v| VerificationFailed(format!("division invalid: {v}")))?;
            emit(out.as_deref(), &format::write_division(&div))
        }
        Command::Bench {
            config,
            acceptance,
            family,
            n,
            m,
            seed,
            lifetime,
            algo,
            safety_multiplier,
            out,
        } => {
            let mut cfg = match (config, acceptance) {
                (Some(_), true) => bail!("--config and --acceptance are exclusive"),
                (Some(p), false) => {
                    let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                    BenchConfig::from_toml(&text).map_err(|e| anyhow!("{}: {e}", p.display()))?
                }
                (None, true) => BenchConfig::acceptance(),
                (None, false) => {
                    let n = n.ok_or_else(|| anyhow!("bench needs --config, --acceptance or --n"))?;
                    let family = family.unwrap_or(Family::SConnected);
                    BenchConfig {
                        suite: vec![SuiteConfig {
                            family: family.id().into(),
                            n: vec![n],
                            m: vec![m.unwrap_or(1)],
                            seeds: vec![seed.unwrap_or(1)],
                            lifetime: lifetime.unwrap_or(100_000),
                            algorithms: vec![algo.unwrap_or(Algorithm::ExploreAll).id().into()],
                            k: None,
                        }],
                        safety_multiplier: None,
                    }
                }
            };
            if safety_multiplier.is_some() {
                cfg.safety_multiplier = safety_multiplier;
            }
            let records = bench::run_suite(&cfg).map_err(|e| anyhow!(e))?;
            bench::write_outputs(&out, &records)?;
            print!("{}", bench::summary_string(&records));
            Ok(())
        }
        Command::Trace {
            graph,
            schedule,
            max_snapshots,
            out,
        } => {
            let file = load_graph(&graph)?;
            let sched = load_schedule(&schedule)?;
            if let Some(v) = verify_schedule(&file.graph, &sched).violation {
                return Err(VerificationFailed(format!("invalid: {v}")).into());
            }
            let mut text = String::from("# snapshot then one position per agent\n");
            let last = sched.makespan().min(max_snapshots);
            for t in 0..=last {
                let pos: Vec<String> = sched.positions_at(t).iter().map(|v| v.to_string()).collect();
                text.push_str(&format!("{t} {}\n", pos.join(" ")));
            }
            if last < sched.makespan() {
                text.push_str(&format!("# truncated at {last} of {}\n", sched.makespan()));
            }
            emit(out.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<VerificationFailed>() => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
