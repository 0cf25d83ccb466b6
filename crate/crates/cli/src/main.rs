//! `pathweave` command-line front end.
//!
//! Data goes to stdout as JSON, diagnostics to stderr. Exit codes: 0 ok,
//! 1 replay mismatch, 2 usage or configuration error, 3 negative cycle.

mod jobs;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use jobs::{Job, NavJob, SeqJob};
use pathweave::graph::read_graph_file;
use pathweave::lab::presets;
use pathweave::lab::{BenchConfig, ConvergenceConfig, GraphFamily, GraphScanConfig, PairExperimentConfig};
use pathweave::manifest::RunManifest;
use pathweave::plasticity::{ExplorationPolicy, LearningConfig, NavConfig, NavRunOptions, Scenario};
use pathweave::{
    bf_v1, bf_v2, graph_to_network, nnbf_solve, path_cost, reconstruct_path,
    reconstruct_path_from_max_inputs, CostRange, Error, GeneratorConfig, DEFAULT_K,
};

const SEED_ENV: &str = "PATHWEAVE_SEED";

#[derive(Parser)]
#[command(name = "pathweave", version, about = "Shortest paths by relaxation and by activation propagation")]
struct Cli {
    /// Worker threads for experiments (outputs do not depend on it).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random graph and write it as an edge list (or JSON for `.json`).
    Generate(GenerateArgs),
    /// Run one solver on a graph file.
    Solve(SolveArgs),
    /// Minimal K for random path pairs.
    Pairs(ExperimentArgs),
    /// Minimal ladder K for whole random graphs.
    K0scan(ExperimentArgs),
    /// Sweeps until convergence for BF and NN-BF.
    Converge(ExperimentArgs),
    /// Wall time per sweep.
    Bench(ExperimentArgs),
    /// Learning scenarios.
    #[command(subcommand)]
    Learn(LearnCommand),
    /// Re-run a manifest and compare output digests.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long, default_value_t = 0.1)]
    edge_prob: f64,
    #[arg(long, default_value_t = 1.0)]
    cost_min: f64,
    #[arg(long, default_value_t = 100.0)]
    cost_max: f64,
    #[arg(long, default_value_t = 0.0)]
    neg_prob: f64,
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    neg_min: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    neg_max: f64,
    /// Draw real-valued costs instead of integers.
    #[arg(long)]
    real_costs: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Bf1,
    Bf2,
    Nnbf,
}

#[derive(Args)]
struct SolveArgs {
    graph: PathBuf,
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long, default_value_t = 0)]
    source: usize,
    /// Cost-to-weight scale for nnbf.
    #[arg(long, default_value_t = DEFAULT_K)]
    k: f64,
    #[arg(long)]
    target: Option<usize>,
    /// Run the full sweep budget instead of stopping at the first quiet sweep.
    #[arg(long)]
    no_early_stop: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Named configuration, e.g. fig3-desk.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Subcommand)]
enum LearnCommand {
    /// Grid navigation with obstacles.
    Nav(NavArgs),
    /// Event-sequence learning over many seeds.
    Seq(SeqArgs),
}

#[derive(Args)]
struct NavArgs {
    #[arg(long, default_value = "static")]
    scenario: String,
    #[arg(long, default_value_t = 2000)]
    iterations: usize,
    /// Remove obstacles after this many iterations (dynamic default 1500).
    #[arg(long)]
    remove_at: Option<usize>,
    #[arg(long, default_value = "least-visited")]
    policy: String,
    #[arg(long)]
    record_weights: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SeqArgs {
    #[arg(long, default_value = "ABCDEF")]
    target: String,
    #[arg(long, default_value = "ABCDEF")]
    alphabet: String,
    #[arg(long, default_value_t = 1)]
    seeds: usize,
    /// First seed; run `i` uses `seed + i`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ReplayArgs {
    manifest: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Debug)]
struct ReplayMismatch(Vec<String>);

impl std::fmt::Display for ReplayMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "replayed outputs differ: {}", self.0.join(", "))
    }
}

impl std::error::Error for ReplayMismatch {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} workers: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<ReplayMismatch>().is_some() {
                ExitCode::from(1)
            } else if matches!(err.downcast_ref::<Error>(), Some(Error::NegativeCycle(_))) {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

/// `PATHWEAVE_SEED` wins over `--seed`.
fn effective_seed(flag: Option<u64>) -> anyhow::Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => Ok(Some(v.trim().parse().with_context(|| format!("{SEED_ENV}={v} is not a u64"))?)),
        Err(_) => Ok(flag),
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

fn print_json(value: &serde_json::Value) {
    println!("{value}");
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Generate(args) => generate(args),
        Command::Solve(args) => solve(args),
        Command::Pairs(args) => {
            let seed = effective_seed(args.seed)?;
            let cfg: PairExperimentConfig = match (&args.preset, &args.config) {
                (Some(name), _) => presets::pairs_preset(name, seed.unwrap_or(0))
                    .ok_or_else(|| unknown_preset(name, presets::PAIR_PRESETS))?,
                (None, Some(path)) => {
                    let mut cfg: PairExperimentConfig = read_config(path)?;
                    if let Some(s) = seed {
                        cfg.seed = s;
                    }
                    cfg
                }
                _ => unreachable!("clap requires a preset or a config"),
            };
            execute(Job::Pairs(cfg), &args.out_dir)
        }
        Command::K0scan(args) => {
            let seed = effective_seed(args.seed)?;
            let cfg: GraphScanConfig = match (&args.preset, &args.config) {
                (Some(name), _) => presets::graph_scan_preset(name, seed.unwrap_or(0))
                    .ok_or_else(|| unknown_preset(name, presets::GRAPH_SCAN_PRESETS))?,
                (None, Some(path)) => {
                    let mut cfg: GraphScanConfig = read_config(path)?;
                    reseed(&mut cfg.families, seed);
                    cfg
                }
                _ => unreachable!("clap requires a preset or a config"),
            };
            execute(Job::K0scan(cfg), &args.out_dir)
        }
        Command::Converge(args) => {
            let seed = effective_seed(args.seed)?;
            let cfg: ConvergenceConfig = match (&args.preset, &args.config) {
                (Some(name), _) => presets::convergence_preset(name, seed.unwrap_or(0))
                    .ok_or_else(|| unknown_preset(name, presets::CONVERGENCE_PRESETS))?,
                (None, Some(path)) => {
                    let mut cfg: ConvergenceConfig = read_config(path)?;
                    reseed(&mut cfg.families, seed);
                    cfg
                }
                _ => unreachable!("clap requires a preset or a config"),
            };
            execute(Job::Converge(cfg), &args.out_dir)
        }
        Command::Bench(args) => {
            let seed = effective_seed(args.seed)?;
            let cfg: BenchConfig = match (&args.preset, &args.config) {
                (Some(name), _) => presets::bench_preset(name, seed.unwrap_or(0))
                    .ok_or_else(|| unknown_preset(name, presets::BENCH_PRESETS))?,
                (None, Some(path)) => {
                    let mut cfg: BenchConfig = read_config(path)?;
                    if let Some(s) = seed {
                        for (i, g) in cfg.graphs.iter_mut().enumerate() {
                            g.seed = s.wrapping_add((i as u64) << 32);
                        }
                    }
                    cfg
                }
                _ => unreachable!("clap requires a preset or a config"),
            };
            execute(Job::Bench(cfg), &args.out_dir)
        }
        Command::Learn(LearnCommand::Nav(args)) => {
            let seed = effective_seed(args.seed)?.unwrap_or(0);
            let scenario: Scenario = args.scenario.parse()?;
            let policy: ExplorationPolicy = args.policy.parse()?;
            let job = NavJob {
                scenario,
                environment: NavConfig::scenario(scenario, seed),
                learning: LearningConfig::default(),
                run: NavRunOptions {
                    iterations: args.iterations,
                    obstacle_removal_at: args.remove_at.or(scenario.default_removal()),
                    policy,
                    seed,
                    record_weights: args.record_weights,
                },
            };
            execute(Job::LearnNav(job), &args.out_dir)
        }
        Command::Learn(LearnCommand::Seq(args)) => {
            let job = SeqJob {
                alphabet: args.alphabet,
                target: args.target,
                seeds: args.seeds,
                first_seed: effective_seed(args.seed)?.unwrap_or(0),
            };
            execute(Job::LearnSeq(job), &args.out_dir)
        }
        Command::Replay(args) => replay(&args),
    }
}

fn unknown_preset(name: &str, known: &[&str]) -> anyhow::Error {
    Error::InvalidConfig(format!("unknown preset `{name}` (known: {})", known.join(", "))).into()
}

fn read_config<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn reseed(families: &mut [GraphFamily], seed: Option<u64>) {
    if let Some(s) = seed {
        for (f, fam) in families.iter_mut().enumerate() {
            fam.generator.seed = s.wrapping_add((f as u64) << 32);
        }
    }
}

/// Runs `job` into `out_dir`, writes its manifest and prints its summary.
fn execute(job: Job, out_dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let mut manifest = RunManifest::new(job.command(), job.config_json()?, job.seed(), now());
    manifest.deterministic = job.deterministic();
    let (outputs, summary) = job.execute(out_dir)?;
    for name in &outputs {
        manifest.record_output(out_dir, name)?;
    }
    manifest.finished_at = now();
    manifest.write(&out_dir.join("manifest.json"))?;
    print_json(&summary);
    Ok(())
}

fn replay(args: &ReplayArgs) -> anyhow::Result<()> {
    let manifest = RunManifest::read(&args.manifest)
        .with_context(|| format!("reading manifest {}", args.manifest.display()))?;
    let job = Job::from_manifest(&manifest)?;
    std::fs::create_dir_all(&args.out_dir)?;
    let (outputs, _) = job.execute(&args.out_dir)?;
    let mut replayed = RunManifest::new(&manifest.command, manifest.config.clone(), manifest.seed, now());
    replayed.deterministic = manifest.deterministic;
    for name in &outputs {
        replayed.record_output(&args.out_dir, name)?;
    }
    replayed.finished_at = now();
    replayed.write(&args.out_dir.join("manifest.json"))?;
    let mismatched: Vec<String> = manifest
        .outputs
        .iter()
        .filter(|(name, digest)| replayed.outputs.get(*name) != Some(digest))
        .map(|(name, _)| name.clone())
        .collect();
    print_json(&json!({
        "command": manifest.command,
        "deterministic": manifest.deterministic,
        "identical": mismatched.is_empty(),
        "mismatched": mismatched,
    }));
    if manifest.deterministic && !mismatched.is_empty() {
        bail!(ReplayMismatch(mismatched));
    }
    Ok(())
}

fn generate(args: GenerateArgs) -> anyhow::Result<()> {
    let generator = GeneratorConfig {
        node_count: args.nodes,
        edge_prob: args.edge_prob,
        pos_cost_range: CostRange::new(args.cost_min, args.cost_max),
        neg_cost_range: CostRange::new(args.neg_min, args.neg_max),
        neg_prob: args.neg_prob,
        integer_costs: !args.real_costs,
        seed: effective_seed(args.seed)?.unwrap_or(0),
    };
    let dir = match args.out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let file = args
        .out
        .file_name()
        .context("--out must name a file")?
        .to_string_lossy()
        .into_owned();
    let job = Job::Generate { generator, file };
    std::fs::create_dir_all(&dir)?;
    let mut manifest = RunManifest::new(job.command(), job.config_json()?, job.seed(), now());
    let (outputs, summary) = job.execute(&dir)?;
    for name in &outputs {
        manifest.record_output(&dir, name)?;
    }
    manifest.finished_at = now();
    let mut manifest_path = args.out.clone().into_os_string();
    manifest_path.push(".manifest.json");
    manifest.write(Path::new(&manifest_path))?;
    print_json(&summary);
    Ok(())
}

fn solve(args: SolveArgs) -> anyhow::Result<()> {
    let graph = read_graph_file(&args.graph).with_context(|| format!("reading {}", args.graph.display()))?;
    let early_stop = !args.no_early_stop;
    let bf = bf_v1(&graph, args.source, true)?;
    if bf.negative_cycle_detected {
        return Err(Error::NegativeCycle(args.source).into());
    }
    let mut out = match args.algo {
        Algo::Bf1 | Algo::Bf2 => {
            let result = match args.algo {
                Algo::Bf1 => bf_v1(&graph, args.source, early_stop)?,
                _ => bf_v2(&graph, args.source, early_stop)?,
            };
            let mut out = result.to_json();
            if let Some(t) = args.target {
                let path = reconstruct_path(&result, t)?;
                out["target"] = json!(t);
                out["path"] = json!(path);
                out["cost"] = jobs::float_json(result.distances[t]);
            }
            out
        }
        Algo::Nnbf => {
            let network = graph_to_network(&graph, args.k)?;
            let result = nnbf_solve(&network, args.source, early_stop, None)?;
            let mut out = result.to_json();
            out["k"] = json!(args.k);
            if let Some(t) = args.target {
                let path = reconstruct_path_from_max_inputs(&result, t)?;
                let cost = match &path {
                    Some(p) => path_cost(&graph, p)?,
                    None => f64::INFINITY,
                };
                out["target"] = json!(t);
                out["path"] = json!(path);
                out["cost"] = jobs::float_json(cost);
            }
            out
        }
    };
    out["algo"] = json!(match args.algo {
        Algo::Bf1 => "bf1",
        Algo::Bf2 => "bf2",
        Algo::Nnbf => "nnbf",
    });
    print_json(&out);
    Ok(())
}
