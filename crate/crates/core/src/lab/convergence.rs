use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{family_items, validate_families, GraphFamily};
use crate::bf::bf_v1;
use crate::error::Result;
use crate::graph::graph_to_network;
use crate::nnbf::{nnbf_solve, DEFAULT_K};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceConfig {
    pub families: Vec<GraphFamily>,
    #[serde(default = "default_k")]
    pub k: f64,
}

fn default_k() -> f64 {
    DEFAULT_K
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub family: usize,
    pub seed: u64,
    pub edges: usize,
    pub bf_iterations: usize,
    pub nnbf_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyConvergence {
    pub nodes: usize,
    pub density: f64,
    pub mean_edges: f64,
    pub max_bf: usize,
    pub max_nnbf: usize,
    /// iterations -> number of graphs
    pub histogram_bf: BTreeMap<usize, usize>,
    pub histogram_nnbf: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub records: Vec<ConvergenceRecord>,
    pub families: Vec<FamilyConvergence>,
}

/// Sweeps until the first quiet sweep, for bf_v1 and NN-BF on every graph,
/// from source 0.
pub fn convergence_experiment(config: &ConvergenceConfig) -> Result<ConvergenceReport> {
    validate_families(&config.families)?;
    let items = family_items(&config.families);
    let records: Vec<ConvergenceRecord> = items
        .par_iter()
        .map(|&(f, i)| {
            let fam = &config.families[f];
            let graph = fam.graph(i)?;
            let bf = bf_v1(&graph, 0, true)?;
            let net = graph_to_network(&graph, config.k)?;
            let nn = nnbf_solve(&net, 0, true, None)?;
            Ok(ConvergenceRecord {
                family: f,
                seed: fam.graph_seed(i),
                edges: graph.edge_count(),
                bf_iterations: bf.iterations_used,
                nnbf_iterations: nn.iterations_used,
            })
        })
        .collect::<Result<_>>()?;

    let families = config
        .families
        .iter()
        .enumerate()
        .map(|(f, fam)| {
            let rs: Vec<_> = records.iter().filter(|r| r.family == f).collect();
            let mut histogram_bf = BTreeMap::new();
            let mut histogram_nnbf = BTreeMap::new();
            for r in &rs {
                *histogram_bf.entry(r.bf_iterations).or_insert(0) += 1;
                *histogram_nnbf.entry(r.nnbf_iterations).or_insert(0) += 1;
            }
            FamilyConvergence {
                nodes: fam.generator.node_count,
                density: fam.generator.edge_prob,
                mean_edges: rs.iter().map(|r| r.edges as f64).sum::<f64>() / rs.len() as f64,
                max_bf: rs.iter().map(|r| r.bf_iterations).max().unwrap_or(0),
                max_nnbf: rs.iter().map(|r| r.nnbf_iterations).max().unwrap_or(0),
                histogram_bf,
                histogram_nnbf,
            }
        })
        .collect();
    Ok(ConvergenceReport { records, families })
}
