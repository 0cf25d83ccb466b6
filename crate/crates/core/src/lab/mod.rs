//! Experiments comparing Bellman-Ford with NN-BF: minimal-K statistics for
//! path pairs and whole graphs, sweep counts to convergence, and per-sweep
//! timing.
//!
//! Every experiment is a list of independent work items, each with its own
//! seeded stream. Items run on the ambient rayon pool and results are
//! collected in item order, so outputs are byte-identical for any worker
//! count. Timing is the exception: it always runs on the calling thread.

mod bench;
mod convergence;
mod graph_scan;
mod output;
mod pairs;
pub mod presets;

pub use bench::{log_log_slope, runtime_benchmark, BenchConfig, RuntimeRow};
pub use convergence::{
    convergence_experiment, ConvergenceConfig, ConvergenceRecord, ConvergenceReport,
    FamilyConvergence,
};
pub use graph_scan::{
    decade_ladder, graph_k0, graph_k0_scan, nnbf_matches_bf, FamilyK0, GraphScanConfig,
};
pub use output::{
    write_convergence_csv, write_convergence_histogram_csv, write_k0_graphs_csv,
    write_k0_pairs_csv, write_runtime_csv,
};
pub use pairs::{
    contrast, find_k0, k0_floor, pair_experiment, products_ordered_correctly, K0Record,
    PairExperimentConfig, PathPair, K0_PRECISION,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{generate_random_graph, GeneratorConfig, Graph};

/// A batch of random graphs sharing one generator config. Graph `i` is drawn
/// with seed `generator.seed + i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFamily {
    pub generator: GeneratorConfig,
    pub graphs: usize,
}

impl GraphFamily {
    pub fn new(generator: GeneratorConfig, graphs: usize) -> Self {
        GraphFamily { generator, graphs }
    }

    pub fn graph_seed(&self, index: usize) -> u64 {
        self.generator.seed.wrapping_add(index as u64)
    }

    pub fn graph(&self, index: usize) -> Result<Graph> {
        generate_random_graph(&self.generator.with_seed(self.graph_seed(index)))
    }

    pub fn cost_max(&self) -> f64 {
        self.generator.pos_cost_range.max
    }
}

/// Work items `(family, graph index)` in deterministic order.
pub(crate) fn family_items(families: &[GraphFamily]) -> Vec<(usize, usize)> {
    families
        .iter()
        .enumerate()
        .flat_map(|(f, fam)| (0..fam.graphs).map(move |i| (f, i)))
        .collect()
}

pub(crate) fn validate_families(families: &[GraphFamily]) -> Result<()> {
    if families.is_empty() {
        return Err(Error::InvalidConfig("no graph families given".into()));
    }
    for fam in families {
        fam.generator.validate()?;
        if fam.graphs == 0 {
            return Err(Error::InvalidConfig("family with zero graphs".into()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Bf1,
    Bf2,
    Nnbf,
}

impl Solver {
    pub const ALL: [Solver; 3] = [Solver::Bf1, Solver::Bf2, Solver::Nnbf];

    pub fn as_str(self) -> &'static str {
        match self {
            Solver::Bf1 => "bf1",
            Solver::Bf2 => "bf2",
            Solver::Nnbf => "nnbf",
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bf1" => Ok(Solver::Bf1),
            "bf2" => Ok(Solver::Bf2),
            "nnbf" => Ok(Solver::Nnbf),
            other => Err(Error::InvalidConfig(format!(
                "unknown solver `{other}` (expected bf1, bf2 or nnbf)"
            ))),
        }
    }
}
