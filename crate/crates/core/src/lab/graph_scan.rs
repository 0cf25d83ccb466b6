//! Graph-level minimal K: the smallest rung of a K ladder from which NN-BF's
//! max-input paths cost exactly what Bellman-Ford's distances say, for every
//! node, on that rung and every higher one.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{family_items, validate_families, GraphFamily};
use crate::bf::{bf_v1, ShortestPathResult};
use crate::error::{Error, Result};
use crate::graph::{graph_to_network, Graph};
use crate::nnbf::{nnbf_solve, tree_path_costs};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphScanConfig {
    pub families: Vec<GraphFamily>,
    /// Ascending K values.
    pub ladder: Vec<f64>,
}

impl GraphScanConfig {
    pub fn validate(&self) -> Result<()> {
        validate_families(&self.families)?;
        if self.ladder.is_empty()
            || self.ladder.iter().any(|k| !(*k > 0.0))
            || self.ladder.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidConfig(
                "ladder must be non-empty, positive and strictly ascending".into(),
            ));
        }
        Ok(())
    }
}

/// `10^lo, 10^(lo+1), ..., 10^hi`.
pub fn decade_ladder(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|e| 10f64.powi(e)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyK0 {
    pub nodes: usize,
    pub density: f64,
    pub cost_max: f64,
    /// Per graph; `None` when no rung of the ladder works.
    pub graph_k0: Vec<Option<f64>>,
}

impl FamilyK0 {
    /// Largest per-graph K0, `inf` if any graph had none.
    pub fn max_k0(&self) -> f64 {
        self.graph_k0
            .iter()
            .map(|k| k.unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

/// Whether NN-BF at scale `k` reproduces `bf` on `graph`: the same nodes are
/// reached and every max-input path costs exactly the BF distance.
///
/// A solve may use its whole sweep budget without a quiet sweep (a chain
/// over all nodes needs exactly `|V| - 1` changing sweeps), so the pointer
/// tree left by the last sweep is what gets compared.
pub fn nnbf_matches_bf(graph: &Graph, bf: &ShortestPathResult, k: f64) -> Result<bool> {
    let network = graph_to_network(graph, k)?;
    let nn = nnbf_solve(&network, bf.source, true, None)?;
    let costs = tree_path_costs(&network, &nn)?;
    Ok(costs.iter().zip(&bf.distances).all(|(c, &d)| match c {
        Some(c) => *c == d,
        None => d == f64::INFINITY,
    }))
}

/// Ladder K0 of one graph from source 0.
pub fn graph_k0(graph: &Graph, ladder: &[f64]) -> Result<Option<f64>> {
    let bf = bf_v1(graph, 0, true)?;
    if bf.negative_cycle_detected {
        return Err(Error::NegativeCycle(0));
    }
    let mut k0 = None;
    // scan from the top; stop at the first failing rung
    for &k in ladder.iter().rev() {
        if nnbf_matches_bf(graph, &bf, k)? {
            k0 = Some(k);
        } else {
            break;
        }
    }
    Ok(k0)
}

pub fn graph_k0_scan(config: &GraphScanConfig) -> Result<Vec<FamilyK0>> {
    config.validate()?;
    let items = family_items(&config.families);
    let k0s: Vec<Option<f64>> = items
        .par_iter()
        .map(|&(f, i)| {
            let graph = config.families[f].graph(i)?;
            graph_k0(&graph, &config.ladder)
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<FamilyK0> = config
        .families
        .iter()
        .map(|fam| FamilyK0 {
            nodes: fam.generator.node_count,
            density: fam.generator.edge_prob,
            cost_max: fam.cost_max(),
            graph_k0: Vec::with_capacity(fam.graphs),
        })
        .collect();
    for (&(f, _), k0) in items.iter().zip(k0s) {
        out[f].graph_k0.push(k0);
    }
    Ok(out)
}
