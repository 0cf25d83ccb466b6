//! Named experiment configurations. `*-full` presets run at the published
//! scale; `*-desk` presets are cut down to run in minutes on a laptop.
//!
//! Family `f` of a preset draws its graphs from base seed `seed + (f << 32)`,
//! so families never share a stream.

use super::{
    decade_ladder, BenchConfig, ConvergenceConfig, GraphFamily, GraphScanConfig,
    PairExperimentConfig, Solver,
};
use crate::graph::GeneratorConfig;
use crate::nnbf::DEFAULT_K;

pub const PAIR_PRESETS: &[&str] = &["fig3-full", "fig3-desk"];
pub const GRAPH_SCAN_PRESETS: &[&str] = &["fig4-full", "fig4-desk"];
pub const CONVERGENCE_PRESETS: &[&str] = &["fig5-full", "fig5-desk"];
pub const BENCH_PRESETS: &[&str] = &["scaling-full", "scaling-desk"];

fn family_seed(seed: u64, family: usize) -> u64 {
    seed.wrapping_add((family as u64) << 32)
}

fn positive_family(nodes: usize, p: f64, cost_max: f64, graphs: usize, seed: u64) -> GraphFamily {
    GraphFamily::new(GeneratorConfig::positive(nodes, p, cost_max, seed), graphs)
}

/// Edge probability giving `edges` expected edges on `nodes` nodes.
fn prob_for_edges(nodes: usize, edges: f64) -> f64 {
    (edges / (nodes * (nodes - 1)) as f64).min(1.0)
}

pub fn pairs_preset(name: &str, seed: u64) -> Option<PairExperimentConfig> {
    let (lengths, trials) = match name {
        "fig3-full" => (vec![2, 3, 4, 5, 6, 7, 8, 10, 20, 30, 40, 50, 100, 200], 60),
        "fig3-desk" => (vec![2, 5, 10, 20, 50], 20),
        _ => return None,
    };
    Some(PairExperimentConfig {
        lengths,
        trials_per_combination: trials,
        cost_mean_range: (1.0, 21.0),
        cost_sigma_range: (0.0, 5.0),
        k_max: 1e9,
        seed,
    })
}

pub fn graph_scan_preset(name: &str, seed: u64) -> Option<GraphScanConfig> {
    let (nodes, densities, cost_maxes): (&[usize], &[f64], &[f64]) = match name {
        "fig4-full" => (&[500, 1000, 2000], &[0.05, 0.1, 0.5, 1.0], &[10.0, 100.0, 1000.0]),
        "fig4-desk" => (&[100, 500], &[0.05, 1.0], &[10.0, 1000.0]),
        _ => return None,
    };
    let mut families = Vec::new();
    for &n in nodes {
        for &p in densities {
            for &c in cost_maxes {
                let graphs = match name {
                    "fig4-desk" => 100,
                    _ if c == 1000.0 && ((n == 500 && p <= 0.1) || (n == 1000 && p == 0.05)) => {
                        10_000
                    }
                    _ => 1000,
                };
                let f = families.len();
                families.push(positive_family(n, p, c, graphs, family_seed(seed, f)));
            }
        }
    }
    Some(GraphScanConfig {
        families,
        ladder: decade_ladder(0, 8),
    })
}

pub fn convergence_preset(name: &str, seed: u64) -> Option<ConvergenceConfig> {
    let (nodes, graphs, probs): (usize, usize, Vec<f64>) = match name {
        "fig5-full" => {
            let n = 5000;
            let probs = [12.5e3, 25e3, 250e3, 2.5e6, 12.5e6, 24.995e6]
                .iter()
                .map(|&e| prob_for_edges(n, e))
                .collect();
            (n, 500, probs)
        }
        "fig5-desk" => {
            let n = 1000;
            // sparse rows keep the mean out-degree (2.5 and 5) of the full preset
            let mut probs = vec![2.5 / 999.0, 5.0 / 999.0];
            probs.extend([0.01, 0.1, 0.5, 1.0]);
            (n, 100, probs)
        }
        _ => return None,
    };
    let families = probs
        .iter()
        .enumerate()
        .map(|(f, &p)| positive_family(nodes, p, 10.0, graphs, family_seed(seed, f)))
        .collect();
    Some(ConvergenceConfig {
        families,
        k: DEFAULT_K,
    })
}

pub fn bench_preset(name: &str, seed: u64) -> Option<BenchConfig> {
    let (nodes, probs, timed): (usize, &[f64], usize) = match name {
        "scaling-full" => (5000, &[0.0005, 0.001, 0.01, 0.1, 0.5, 1.0], 20),
        "scaling-desk" => (2000, &[0.01, 0.05, 0.25, 1.0], 20),
        _ => return None,
    };
    let graphs = probs
        .iter()
        .enumerate()
        .map(|(f, &p)| positive_family(nodes, p, 10.0, 1, family_seed(seed, f)).generator)
        .collect();
    Some(BenchConfig {
        graphs,
        warmup_sweeps: 3,
        timed_sweeps: timed,
        solvers: Solver::ALL.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_validate() {
        for name in PAIR_PRESETS {
            pairs_preset(name, 1).unwrap().validate().unwrap();
        }
        for name in GRAPH_SCAN_PRESETS {
            graph_scan_preset(name, 1).unwrap().validate().unwrap();
        }
        for name in CONVERGENCE_PRESETS {
            let cfg = convergence_preset(name, 1).unwrap();
            super::super::validate_families(&cfg.families).unwrap();
        }
        for name in BENCH_PRESETS {
            let cfg = bench_preset(name, 1).unwrap();
            assert!(cfg.graphs.iter().all(|g| g.validate().is_ok()));
        }
        assert!(pairs_preset("fig4-desk", 1).is_none());
    }

    #[test]
    fn desk_sizes() {
        assert_eq!(pairs_preset("fig3-desk", 0).unwrap().work_items(), 500);
        let scan = graph_scan_preset("fig4-desk", 0).unwrap();
        assert_eq!(scan.families.len(), 8);
        assert!(scan.families.iter().all(|f| f.graphs == 100));
        let full = graph_scan_preset("fig4-full", 0).unwrap();
        assert_eq!(full.families.iter().filter(|f| f.graphs == 10_000).count(), 3);
        let conv = convergence_preset("fig5-desk", 0).unwrap();
        assert_eq!(conv.families.len(), 6);
    }

    #[test]
    fn family_seeds_disjoint() {
        let scan = graph_scan_preset("fig4-desk", 7).unwrap();
        assert_eq!(scan.families[0].generator.seed, 7);
        assert_eq!(scan.families[1].generator.seed, 7 + (1 << 32));
    }
}
