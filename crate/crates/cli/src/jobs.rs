//! Replayable work units. A job is fully described by its command name and
//! config, which is exactly what a manifest stores.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use pathweave::graph::{generate_random_graph, write_graph_file};
use pathweave::lab::{
    convergence_experiment, graph_k0_scan, pair_experiment, runtime_benchmark,
    write_convergence_csv, write_convergence_histogram_csv, write_k0_graphs_csv,
    write_k0_pairs_csv, write_runtime_csv, BenchConfig, ConvergenceConfig, GraphScanConfig,
    PairExperimentConfig,
};
use pathweave::manifest::RunManifest;
use pathweave::plasticity::{
    nav_learning_run, seq_learning_run, LearningConfig, NavConfig, NavEnvironment, NavRunOptions,
    Scenario, SequenceTask,
};
use pathweave::GeneratorConfig;

/// JSON number, or the strings `"inf"`, `"-inf"`, `"nan"`.
pub fn float_json(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NavJob {
    pub scenario: Scenario,
    pub environment: NavConfig,
    pub learning: LearningConfig,
    pub run: NavRunOptions,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeqJob {
    pub alphabet: String,
    pub target: String,
    pub seeds: usize,
    pub first_seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerateJob {
    pub generator: GeneratorConfig,
    pub file: String,
}

pub enum Job {
    Generate { generator: GeneratorConfig, file: String },
    Pairs(PairExperimentConfig),
    K0scan(GraphScanConfig),
    Converge(ConvergenceConfig),
    Bench(BenchConfig),
    LearnNav(NavJob),
    LearnSeq(SeqJob),
}

type Outcome = (Vec<String>, Value);

fn create(dir: &Path, name: &str) -> anyhow::Result<BufWriter<File>> {
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn json_line<W: Write>(out: &mut W, value: &impl Serialize) -> anyhow::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

impl Job {
    pub fn command(&self) -> &'static str {
        match self {
            Job::Generate { .. } => "generate",
            Job::Pairs(_) => "pairs",
            Job::K0scan(_) => "k0scan",
            Job::Converge(_) => "converge",
            Job::Bench(_) => "bench",
            Job::LearnNav(_) => "learn-nav",
            Job::LearnSeq(_) => "learn-seq",
        }
    }

    pub fn config_json(&self) -> anyhow::Result<Value> {
        Ok(match self {
            Job::Generate { generator, file } => serde_json::to_value(GenerateJob {
                generator: generator.clone(),
                file: file.clone(),
            })?,
            Job::Pairs(c) => serde_json::to_value(c)?,
            Job::K0scan(c) => serde_json::to_value(c)?,
            Job::Converge(c) => serde_json::to_value(c)?,
            Job::Bench(c) => serde_json::to_value(c)?,
            Job::LearnNav(c) => serde_json::to_value(c)?,
            Job::LearnSeq(c) => serde_json::to_value(c)?,
        })
    }

    /// Seed recorded in the manifest.
    pub fn seed(&self) -> u64 {
        match self {
            Job::Generate { generator, .. } => generator.seed,
            Job::Pairs(c) => c.seed,
            Job::K0scan(c) => c.families.first().map_or(0, |f| f.generator.seed),
            Job::Converge(c) => c.families.first().map_or(0, |f| f.generator.seed),
            Job::Bench(c) => c.graphs.first().map_or(0, |g| g.seed),
            Job::LearnNav(c) => c.run.seed,
            Job::LearnSeq(c) => c.first_seed,
        }
    }

    pub fn deterministic(&self) -> bool {
        !matches!(self, Job::Bench(_))
    }

    pub fn from_manifest(manifest: &RunManifest) -> anyhow::Result<Self> {
        let cfg = manifest.config.clone();
        Ok(match manifest.command.as_str() {
            "generate" => {
                let g: GenerateJob = serde_json::from_value(cfg)?;
                Job::Generate {
                    generator: g.generator,
                    file: g.file,
                }
            }
            "pairs" => Job::Pairs(serde_json::from_value(cfg)?),
            "k0scan" => Job::K0scan(serde_json::from_value(cfg)?),
            "converge" => Job::Converge(serde_json::from_value(cfg)?),
            "bench" => Job::Bench(serde_json::from_value(cfg)?),
            "learn-nav" => Job::LearnNav(serde_json::from_value(cfg)?),
            "learn-seq" => Job::LearnSeq(serde_json::from_value(cfg)?),
            other => bail!(pathweave::Error::InvalidConfig(format!(
                "manifest command `{other}` cannot be replayed"
            ))),
        })
    }

    /// Writes the job's files into `dir`; returns their names and a summary.
    pub fn execute(&self, dir: &Path) -> anyhow::Result<Outcome> {
        match self {
            Job::Generate { generator, file } => {
                let graph = generate_random_graph(generator)?;
                write_graph_file(&graph, &dir.join(file))?;
                Ok((
                    vec![file.clone()],
                    json!({"file": file, "nodes": graph.node_count(), "edges": graph.edge_count()}),
                ))
            }
            Job::Pairs(cfg) => {
                let records = pair_experiment(cfg)?;
                let mut out = create(dir, "k0_pairs.csv")?;
                write_k0_pairs_csv(&mut out, &records)?;
                out.flush()?;
                let max = records.iter().map(|r| r.k0).fold(0.0, f64::max);
                Ok((
                    vec!["k0_pairs.csv".into()],
                    json!({
                        "records": records.len(),
                        "dropped_ties": cfg.work_items() - records.len(),
                        "max_k0": float_json(max),
                    }),
                ))
            }
            Job::K0scan(cfg) => {
                let families = graph_k0_scan(cfg)?;
                let mut out = create(dir, "k0_graphs.csv")?;
                write_k0_graphs_csv(&mut out, &families)?;
                out.flush()?;
                let rows: Vec<Value> = families
                    .iter()
                    .map(|f| {
                        json!({
                            "nodes": f.nodes,
                            "density": f.density,
                            "cost_max": f.cost_max,
                            "max_k0": float_json(f.max_k0()),
                        })
                    })
                    .collect();
                Ok((vec!["k0_graphs.csv".into()], json!({ "families": rows })))
            }
            Job::Converge(cfg) => {
                let report = convergence_experiment(cfg)?;
                let mut out = create(dir, "convergence.csv")?;
                write_convergence_csv(&mut out, &report)?;
                out.flush()?;
                let mut hist = create(dir, "convergence_hist.csv")?;
                write_convergence_histogram_csv(&mut hist, &report)?;
                hist.flush()?;
                let rows: Vec<Value> = report
                    .families
                    .iter()
                    .map(|f| {
                        json!({
                            "nodes": f.nodes,
                            "density": f.density,
                            "mean_edges": f.mean_edges,
                            "max_bf": f.max_bf,
                            "max_nnbf": f.max_nnbf,
                        })
                    })
                    .collect();
                Ok((
                    vec!["convergence.csv".into(), "convergence_hist.csv".into()],
                    json!({ "families": rows }),
                ))
            }
            Job::Bench(cfg) => {
                // timing stays on this thread whatever --workers says
                let rows = runtime_benchmark(cfg)?;
                let mut out = create(dir, "runtime.csv")?;
                write_runtime_csv(&mut out, &rows)?;
                out.flush()?;
                Ok((vec!["runtime.csv".into()], serde_json::to_value(&rows)?))
            }
            Job::LearnNav(job) => {
                let env = NavEnvironment::build(&job.environment)?;
                let mut env_file = create(dir, "environment.json")?;
                serde_json::to_writer_pretty(&mut env_file, &env)?;
                env_file.write_all(b"\n")?;
                env_file.flush()?;
                let log = nav_learning_run(&env, &job.learning, &job.run)?;
                let mut out = create(dir, "nav_log.jsonl")?;
                for snap in &log.snapshots {
                    json_line(&mut out, snap)?;
                }
                out.flush()?;
                let last = log.snapshots.last().expect("iteration 0 is always planned");
                Ok((
                    vec!["environment.json".into(), "nav_log.jsonl".into()],
                    json!({
                        "scenario": job.scenario,
                        "iterations": job.run.iterations,
                        "snapshots": log.snapshots.len(),
                        "restarts": log.restarts,
                        "final_path": last.planned_path,
                        "final_length": last.path_euclidean_length,
                    }),
                ))
            }
            Job::LearnSeq(job) => {
                // validate once so a bad target fails before any work
                SequenceTask::new(&job.alphabet, &job.target, job.first_seed)?;
                let runs = (0..job.seeds as u64)
                    .map(|i| {
                        let task = SequenceTask::new(&job.alphabet, &job.target, job.first_seed.wrapping_add(i))?;
                        seq_learning_run(&task)
                    })
                    .collect::<pathweave::Result<Vec<_>>>()?;
                let mut out = create(dir, "seq_log.jsonl")?;
                for run in &runs {
                    for rec in &run.epochs {
                        json_line(
                            &mut out,
                            &json!({
                                "seed": run.seed,
                                "epoch": rec.epoch,
                                "planned": rec.planned,
                                "weights_digest": rec.weights_digest,
                            }),
                        )?;
                    }
                }
                out.flush()?;
                let done: Vec<usize> = runs.iter().filter_map(|r| r.converged_at).collect();
                let mean = if done.is_empty() {
                    Value::Null
                } else {
                    json!(done.iter().sum::<usize>() as f64 / done.len() as f64)
                };
                Ok((
                    vec!["seq_log.jsonl".into()],
                    json!({
                        "target": job.target,
                        "seeds": job.seeds,
                        "converged": done.len(),
                        "fraction": if job.seeds == 0 { 0.0 } else { done.len() as f64 / job.seeds as f64 },
                        "mean_epochs": mean,
                    }),
                ))
            }
        }
    }
}
