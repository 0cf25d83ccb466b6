//! Shortest paths by additive relaxation and by multiplicative activation
//! propagation, plus reward-gated Hebbian learning on the latter.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: edge-list graphs, the seeded random generator, the
//!   cost-to-weight transform and the neuron/synapse view of a graph.
//! - [`bf`]: Bellman-Ford with edge relaxation (v1) and node relaxation (v2).
//! - [`nnbf`]: max-product activation propagation over a [`graph::Network`].
//! - [`lab`]: contrast / minimal-K experiments, convergence counts and
//!   per-sweep timing.
//! - [`plasticity`]: the three-factor rule and the navigation and sequence
//!   learning scenarios.
//! - [`manifest`]: run manifests and file digests used by the CLI.

pub mod bf;
pub mod error;
pub mod graph;
pub mod lab;
pub mod manifest;
pub mod nnbf;
pub mod plasticity;

pub use bf::{bf_v1, bf_v2, detect_negative_cycle, reconstruct_path, ShortestPathResult};
pub use error::{Error, Result};
pub use graph::{
    cost_to_weight, generate_random_graph, graph_to_network, CostRange, Edge, GeneratorConfig,
    Graph, Network, Synapse,
};
pub use nnbf::{
    nnbf_solve, path_cost, reconstruct_path_from_max_inputs, ActivationResult, DEFAULT_K,
};

/// Name of the pseudo-random generator behind every seeded stream in the crate.
///
/// Recorded in run manifests. Streams are created with
/// `ChaCha8Rng::seed_from_u64(seed)`, which is specified bit-for-bit by
/// `rand_core` and therefore portable across platforms.
pub const RNG_IDENTITY: &str = "ChaCha8Rng/rand_chacha-0.9/seed_from_u64";

pub(crate) fn rng_from_seed(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
