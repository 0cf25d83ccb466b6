use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::Solver;
use crate::bf::{EdgeRelaxation, NodeRelaxation};
use crate::error::{Error, Result};
use crate::graph::{generate_random_graph, graph_to_network, GeneratorConfig};
use crate::nnbf::{Propagation, DEFAULT_K};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    /// One graph is drawn per entry.
    pub graphs: Vec<GeneratorConfig>,
    pub warmup_sweeps: usize,
    pub timed_sweeps: usize,
    pub solvers: Vec<Solver>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuntimeRow {
    pub nodes: usize,
    pub density: f64,
    pub edges: usize,
    pub solver: Solver,
    /// Seconds per sweep.
    pub mean: f64,
    pub stddev: f64,
}

/// Wall time of single sweeps, graph and network construction excluded.
///
/// Each solver's state is built once per graph, `warmup_sweeps` sweeps are
/// discarded and each of the next `timed_sweeps` is timed on its own. Sweeps
/// after convergence still touch every edge, so every timed sweep does the
/// same `O(|E|)` work.
pub fn runtime_benchmark(config: &BenchConfig) -> Result<Vec<RuntimeRow>> {
    if config.graphs.is_empty() || config.timed_sweeps == 0 || config.solvers.is_empty() {
        return Err(Error::InvalidConfig(
            "benchmark needs graphs, solvers and at least one timed sweep".into(),
        ));
    }
    let mut rows = Vec::new();
    for gen in &config.graphs {
        let graph = generate_random_graph(gen)?;
        for &solver in &config.solvers {
            let samples = match solver {
                Solver::Bf1 => {
                    let mut s = EdgeRelaxation::new(&graph, 0)?;
                    time_sweeps(config, || s.sweep())
                }
                Solver::Bf2 => {
                    let mut s = NodeRelaxation::new(&graph, 0)?;
                    time_sweeps(config, || s.sweep())
                }
                Solver::Nnbf => {
                    let net = graph_to_network(&graph, DEFAULT_K)?;
                    let mut s = Propagation::new(&net, 0)?;
                    time_sweeps(config, || s.sweep())
                }
            };
            let (mean, stddev) = mean_std(&samples);
            rows.push(RuntimeRow {
                nodes: gen.node_count,
                density: gen.edge_prob,
                edges: graph.edge_count(),
                solver,
                mean,
                stddev,
            });
        }
    }
    Ok(rows)
}

fn time_sweeps(config: &BenchConfig, mut sweep: impl FnMut() -> bool) -> Vec<f64> {
    for _ in 0..config.warmup_sweeps {
        std::hint::black_box(sweep());
    }
    (0..config.timed_sweeps)
        .map(|_| {
            let t = Instant::now();
            std::hint::black_box(sweep());
            t.elapsed().as_secs_f64()
        })
        .collect()
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<_> = [1.0f64, 10.0, 100.0, 1000.0]
            .iter()
            .map(|&x| (x, 3.0 * x.powf(1.5)))
            .collect();
        assert!((log_log_slope(&pts) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn rows_per_graph_and_solver() {
        let cfg = BenchConfig {
            graphs: vec![
                GeneratorConfig::positive(50, 0.0, 10.0, 1),
                GeneratorConfig::positive(50, 0.2, 10.0, 1),
            ],
            warmup_sweeps: 1,
            timed_sweeps: 3,
            solvers: Solver::ALL.to_vec(),
        };
        let rows = runtime_benchmark(&cfg).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].edges, 0);
        assert!(rows.iter().all(|r| r.mean >= 0.0 && r.stddev >= 0.0));
    }
}
