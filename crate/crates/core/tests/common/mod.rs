//! Reference implementations used only by tests. They share no code with
//! the solvers under test.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use pathweave::plasticity::NavEnvironment;
use pathweave::{generate_random_graph, GeneratorConfig, Graph};

/// Cheapest simple-path cost from `source` to every node by exhaustive DFS.
/// `inf` when unreachable. Exact for graphs without negative cycles.
pub fn brute_force_distances(graph: &Graph, source: usize) -> Vec<f64> {
    let n = graph.node_count();
    let mut adj = vec![Vec::new(); n];
    for e in graph.edges() {
        adj[e.from].push((e.to, e.cost));
    }
    let mut best = vec![f64::INFINITY; n];
    let mut on_path = vec![false; n];
    fn dfs(u: usize, cost: f64, adj: &[Vec<(usize, f64)>], on_path: &mut [bool], best: &mut [f64]) {
        if cost < best[u] {
            best[u] = cost;
        }
        on_path[u] = true;
        for &(v, c) in &adj[u] {
            if !on_path[v] {
                dfs(v, cost + c, adj, on_path, best);
            }
        }
        on_path[u] = false;
    }
    dfs(source, 0.0, &adj, &mut on_path, &mut best);
    best
}

/// True when some cycle has negative total cost (Floyd-Warshall diagonal).
pub fn has_negative_cycle(graph: &Graph) -> bool {
    let n = graph.node_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for e in graph.edges() {
        d[e.from][e.to] = d[e.from][e.to].min(e.cost);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    (0..n).any(|i| d[i][i] < 0.0)
}

/// Negative-cycle-free graph from `config`, trying seeds upward from
/// `config.seed`. Returns the graph and the seed used.
pub fn acyclic_negative_graph(config: &GeneratorConfig) -> (Graph, u64) {
    let mut seed = config.seed;
    loop {
        let g = generate_random_graph(&config.with_seed(seed)).unwrap();
        if !has_negative_cycle(&g) {
            return (g, seed);
        }
        seed += 1_000_003;
    }
}

#[derive(PartialEq)]
struct Item(f64, usize);
impl Eq for Item {}
impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Euclidean shortest start-to-goal length over the arena's feasible moves.
pub fn dijkstra_length(env: &NavEnvironment) -> f64 {
    let n = env.location_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[env.start()] = 0.0;
    heap.push(Item(0.0, env.start()));
    while let Some(Item(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, _) in env.neighbours(u) {
            let loc = env.locations();
            let w = (loc[u].0 - loc[v].0).hypot(loc[u].1 - loc[v].1);
            if d + w < dist[v] {
                dist[v] = d + w;
                heap.push(Item(dist[v], v));
            }
        }
    }
    dist[env.goal()]
}
