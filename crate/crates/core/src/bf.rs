//! Bellman-Ford single-source shortest paths.
//!
//! Two sweep orders share one result type:
//!
//! - v1 relaxes every edge of the edge list, in list order;
//! - v2 visits every vertex `v != source` in ascending order and relaxes
//!   over its incoming edges (in edge-list order).
//!
//! Both relax in place with a strict `<`, so on ties the first predecessor
//! found is kept. Distances start at `+inf`; `inf + c` stays `inf`, so
//! relaxing from an unreached vertex never fires.
//!
//! A sweep budget of `max(|V| - 1, 1)` is used. `iterations_used` counts
//! completed sweeps including the sweep that found nothing to change.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPathResult {
    pub source: usize,
    pub distances: Vec<f64>,
    pub predecessors: Vec<Option<usize>>,
    pub iterations_used: usize,
    pub converged: bool,
    pub negative_cycle_detected: bool,
}

impl ShortestPathResult {
    pub fn is_reachable(&self, node: usize) -> bool {
        self.distances[node] < f64::INFINITY
    }

    /// `{source, distances, predecessors, iterations, converged, negative_cycle}`
    /// with `+inf` written as `"inf"` and missing predecessors as `null`.
    pub fn to_json(&self) -> Value {
        json!({
            "source": self.source,
            "distances": self.distances.iter().map(|&d| float_json(d)).collect::<Vec<_>>(),
            "predecessors": self.predecessors,
            "iterations": self.iterations_used,
            "converged": self.converged,
            "negative_cycle": self.negative_cycle_detected,
        })
    }
}

pub(crate) fn float_json(x: f64) -> Value {
    if x == f64::INFINITY {
        Value::from("inf")
    } else if x == f64::NEG_INFINITY {
        Value::from("-inf")
    } else {
        json!(x)
    }
}

pub(crate) fn sweep_budget(node_count: usize) -> usize {
    node_count.saturating_sub(1).max(1)
}

/// In-place state of a v1 (edge-relaxation) solve.
///
/// Exposed so sweeps can be timed individually; [`bf_v1`] is the usual entry.
/// Holds the edge list in input order as packed `(from, to, cost)` records,
/// which keeps large sweeps memory-bound on 16 bytes per edge.
#[derive(Debug, Clone)]
pub struct EdgeRelaxation {
    edges: Vec<(u32, u32, f64)>,
    source: usize,
    distances: Vec<f64>,
    predecessors: Vec<Option<usize>>,
}

impl EdgeRelaxation {
    pub fn new(graph: &Graph, source: usize) -> Result<Self> {
        graph.check_node(source)?;
        if u32::try_from(graph.node_count()).is_err() {
            return Err(Error::InvalidConfig(format!(
                "{} nodes exceed the edge-relaxation index range",
                graph.node_count()
            )));
        }
        let edges = graph
            .edges()
            .iter()
            .map(|e| (e.from as u32, e.to as u32, e.cost))
            .collect();
        let mut distances = vec![f64::INFINITY; graph.node_count()];
        distances[source] = 0.0;
        Ok(EdgeRelaxation {
            edges,
            source,
            distances,
            predecessors: vec![None; graph.node_count()],
        })
    }

    /// One pass over the edge list. Returns whether any distance changed.
    pub fn sweep(&mut self) -> bool {
        let mut changed = false;
        let dist = &mut self.distances;
        for &(from, to, cost) in &self.edges {
            let (from, to) = (from as usize, to as usize);
            let candidate = dist[from] + cost;
            if candidate < dist[to] {
                dist[to] = candidate;
                self.predecessors[to] = Some(from);
                changed = true;
            }
        }
        changed
    }

    fn into_result(self, iterations_used: usize, converged: bool) -> ShortestPathResult {
        ShortestPathResult {
            source: self.source,
            distances: self.distances,
            predecessors: self.predecessors,
            iterations_used,
            converged,
            negative_cycle_detected: false,
        }
    }
}

/// In-place state of a v2 (node-relaxation) solve.
#[derive(Debug, Clone)]
pub struct NodeRelaxation {
    incoming: Vec<Vec<(usize, f64)>>,
    source: usize,
    distances: Vec<f64>,
    predecessors: Vec<Option<usize>>,
}

impl NodeRelaxation {
    pub fn new(graph: &Graph, source: usize) -> Result<Self> {
        graph.check_node(source)?;
        let mut distances = vec![f64::INFINITY; graph.node_count()];
        distances[source] = 0.0;
        Ok(NodeRelaxation {
            incoming: graph.incoming_index(),
            source,
            distances,
            predecessors: vec![None; graph.node_count()],
        })
    }

    pub fn sweep(&mut self) -> bool {
        let mut changed = false;
        let dist = &mut self.distances;
        for (v, incoming) in self.incoming.iter().enumerate() {
            if v == self.source {
                continue;
            }
            for &(u, cost) in incoming {
                let candidate = dist[u] + cost;
                if candidate < dist[v] {
                    dist[v] = candidate;
                    self.predecessors[v] = Some(u);
                    changed = true;
                }
            }
        }
        changed
    }

    fn into_result(self, iterations_used: usize, converged: bool) -> ShortestPathResult {
        ShortestPathResult {
            source: self.source,
            distances: self.distances,
            predecessors: self.predecessors,
            iterations_used,
            converged,
            negative_cycle_detected: false,
        }
    }
}

fn run_sweeps(budget: usize, early_stop: bool, mut sweep: impl FnMut() -> bool) -> (usize, bool) {
    let mut iterations = 0;
    let mut converged = false;
    while iterations < budget {
        let changed = sweep();
        iterations += 1;
        if !changed {
            converged = true;
            if early_stop {
                break;
            }
        }
    }
    (iterations, converged)
}

/// Bellman-Ford, edge relaxation.
///
/// With `early_stop` the solve ends after the first sweep that changes
/// nothing; otherwise all `|V| - 1` sweeps run. A solve that never saw a
/// quiet sweep is checked for a negative cycle.
pub fn bf_v1(graph: &Graph, source: usize, early_stop: bool) -> Result<ShortestPathResult> {
    let mut state = EdgeRelaxation::new(graph, source)?;
    let (iterations, converged) =
        run_sweeps(sweep_budget(graph.node_count()), early_stop, || state.sweep());
    let mut result = state.into_result(iterations, converged);
    if !converged {
        detect_negative_cycle(graph, &mut result);
    }
    Ok(result)
}

/// Bellman-Ford, node relaxation over per-vertex incoming edges.
pub fn bf_v2(graph: &Graph, source: usize, early_stop: bool) -> Result<ShortestPathResult> {
    let mut state = NodeRelaxation::new(graph, source)?;
    let (iterations, converged) =
        run_sweeps(sweep_budget(graph.node_count()), early_stop, || state.sweep());
    let mut result = state.into_result(iterations, converged);
    if !converged {
        detect_negative_cycle(graph, &mut result);
    }
    Ok(result)
}

/// True iff one more full edge sweep would still lower some distance.
/// Sets `result.negative_cycle_detected` when it does.
pub fn detect_negative_cycle(graph: &Graph, result: &mut ShortestPathResult) -> bool {
    let d = &result.distances;
    let found = graph.edges().iter().any(|e| d[e.from] + e.cost < d[e.to]);
    if found {
        result.negative_cycle_detected = true;
    }
    found
}

/// Walks predecessors back from `target` and returns `[source, .., target]`,
/// or `None` when `target` is unreachable.
pub fn reconstruct_path(result: &ShortestPathResult, target: usize) -> Result<Option<Vec<usize>>> {
    let n = result.distances.len();
    if target >= n {
        return Err(Error::NodeOutOfRange {
            node: target,
            node_count: n,
        });
    }
    if target == result.source {
        return Ok(Some(vec![target]));
    }
    if !result.is_reachable(target) {
        return Ok(None);
    }
    walk_back(&result.predecessors, result.source, target).map(Some)
}

pub(crate) fn walk_back(
    pointers: &[Option<usize>],
    source: usize,
    target: usize,
) -> Result<Vec<usize>> {
    let mut path = vec![target];
    let mut node = target;
    while node != source {
        // a simple path has at most n nodes
        if path.len() > pointers.len() {
            return Err(Error::CorruptPredecessors(target));
        }
        node = pointers[node].ok_or(Error::CorruptPredecessors(target))?;
        path.push(node);
    }
    path.reverse();
    Ok(path)
}
