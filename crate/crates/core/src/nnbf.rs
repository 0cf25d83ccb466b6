//! Max-product activation propagation (NN-BF).
//!
//! Every neuron starts at activation 0 except the source, which starts at 1.
//! A sweep visits neurons in ascending order and, for each incoming
//! connection `(j, w)`, replaces `a[i]` with `a[j] * w` when that is strictly
//! larger, recording `j` as the neuron's max input. Updates are visible to
//! later neurons of the same sweep. After every sweep the source is clamped
//! back to 1, which keeps weights above one (negative costs) from inflating
//! it across sweeps.
//!
//! After convergence the maximal-input pointers form a tree rooted at the
//! source; walking it backwards yields the path with the largest weight
//! product, which for large enough `K` is the cheapest path of the graph.

use serde_json::{json, Value};

use crate::bf::{float_json, sweep_budget, walk_back};
use crate::error::{Error, Result};
use crate::graph::{Graph, Network};

/// Default cost-to-weight scale. Large enough for every graph family the
/// lab has scanned.
pub const DEFAULT_K: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct ActivationResult {
    pub source: usize,
    pub activations: Vec<f64>,
    pub max_inputs: Vec<Option<usize>>,
    pub iterations_used: usize,
    pub converged: bool,
}

impl ActivationResult {
    pub fn to_json(&self) -> Value {
        json!({
            "source": self.source,
            "activations": self.activations.iter().map(|&a| float_json(a)).collect::<Vec<_>>(),
            "max_inputs": self.max_inputs,
            "iterations": self.iterations_used,
            "converged": self.converged,
        })
    }
}

/// In-place propagation state; [`nnbf_solve`] drives it.
#[derive(Debug, Clone)]
pub struct Propagation<'n> {
    network: &'n Network,
    source: usize,
    activations: Vec<f64>,
    max_inputs: Vec<Option<usize>>,
}

impl<'n> Propagation<'n> {
    pub fn new(network: &'n Network, source: usize) -> Result<Self> {
        let n = network.neuron_count();
        if source >= n {
            return Err(Error::NodeOutOfRange {
                node: source,
                node_count: n,
            });
        }
        let mut activations = vec![0.0; n];
        activations[source] = 1.0;
        Ok(Propagation {
            network,
            source,
            activations,
            max_inputs: vec![None; n],
        })
    }

    /// One update of every neuron followed by the source clamp.
    pub fn sweep(&mut self) -> bool {
        let mut changed = false;
        let act = &mut self.activations;
        for i in 0..act.len() {
            for syn in self.network.incoming(i) {
                let weighted_input = act[syn.source] * syn.weight;
                if weighted_input > act[i] {
                    act[i] = weighted_input;
                    self.max_inputs[i] = Some(syn.source);
                    changed = true;
                }
            }
        }
        act[self.source] = 1.0;
        changed
    }

    pub fn activations(&self) -> &[f64] {
        &self.activations
    }

    fn into_result(self, iterations_used: usize, converged: bool) -> ActivationResult {
        ActivationResult {
            source: self.source,
            activations: self.activations,
            max_inputs: self.max_inputs,
            iterations_used,
            converged,
        }
    }
}

/// Propagates activation from `source`.
///
/// Runs `max_sweeps` sweeps (default `max(N - 1, 1)`), or stops after the
/// first sweep that changes nothing when `early_stop` is set.
pub fn nnbf_solve(
    network: &Network,
    source: usize,
    early_stop: bool,
    max_sweeps: Option<usize>,
) -> Result<ActivationResult> {
    let mut state = Propagation::new(network, source)?;
    let budget = max_sweeps.unwrap_or_else(|| sweep_budget(network.neuron_count()));
    let mut iterations = 0;
    let mut converged = false;
    while iterations < budget {
        let changed = state.sweep();
        iterations += 1;
        if !changed {
            converged = true;
            if early_stop {
                break;
            }
        }
    }
    Ok(state.into_result(iterations, converged))
}

/// Walks max-input pointers back from `target`; `None` if `target` never
/// received activation.
pub fn reconstruct_path_from_max_inputs(
    result: &ActivationResult,
    target: usize,
) -> Result<Option<Vec<usize>>> {
    let n = result.activations.len();
    if target >= n {
        return Err(Error::NodeOutOfRange {
            node: target,
            node_count: n,
        });
    }
    if target == result.source {
        return Ok(Some(vec![target]));
    }
    if result.activations[target] == 0.0 {
        return Ok(None);
    }
    walk_back(&result.max_inputs, result.source, target).map(Some)
}

/// Sum of the original edge costs along `path`.
pub fn path_cost(graph: &Graph, path: &[usize]) -> Result<f64> {
    use std::collections::HashMap;
    for &node in path {
        graph.check_node(node)?;
    }
    let mut hops: HashMap<(usize, usize), Option<f64>> =
        path.windows(2).map(|w| ((w[0], w[1]), None)).collect();
    for e in graph.edges() {
        if let Some(slot) = hops.get_mut(&(e.from, e.to)) {
            *slot = Some(e.cost);
        }
    }
    path.windows(2).try_fold(0.0, |total, w| {
        hops[&(w[0], w[1])]
            .map(|c| total + c)
            .ok_or(Error::MissingEdge(w[0], w[1]))
    })
}

/// Cost of the max-input path to every neuron, summed from the source
/// forward using the costs the network retained from its graph. `None` for
/// neurons without activation (and for the rare pointer cycle, which only a
/// non-converged or negative-cycle solve can leave behind).
pub fn tree_path_costs(network: &Network, result: &ActivationResult) -> Result<Vec<Option<f64>>> {
    if !network.has_costs() {
        return Err(Error::InvalidConfig(
            "network does not retain edge costs".into(),
        ));
    }
    let n = network.neuron_count();
    let mut costs: Vec<Option<f64>> = vec![None; n];
    let mut state = vec![0u8; n]; // 0 unvisited, 1 on stack, 2 done
    costs[result.source] = Some(0.0);
    state[result.source] = 2;
    let mut stack = Vec::new();
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        // collect the chain of unresolved ancestors, then fill forward
        let mut node = start;
        loop {
            if state[node] == 2 {
                break;
            }
            if state[node] == 1 || result.activations[node] == 0.0 {
                break;
            }
            state[node] = 1;
            stack.push(node);
            match result.max_inputs[node] {
                Some(parent) => node = parent,
                None => break,
            }
        }
        let mut base = if state[node] == 2 { costs[node] } else { None };
        while let Some(child) = stack.pop() {
            base = match (base, result.max_inputs[child]) {
                (Some(b), Some(parent)) => {
                    let c = network
                        .cost(parent, child)
                        .ok_or(Error::MissingEdge(parent, child))?;
                    Some(b + c)
                }
                _ => None,
            };
            costs[child] = base;
            state[child] = 2;
        }
    }
    Ok(costs)
}

/// Neurons left at zero activation although an active neuron feeds them
/// through a positive weight: the product underflowed.
pub fn underflow_suspects(network: &Network, result: &ActivationResult) -> Vec<usize> {
    (0..network.neuron_count())
        .filter(|&i| i != result.source && result.activations[i] == 0.0)
        .filter(|&i| {
            network
                .incoming(i)
                .iter()
                .any(|s| s.weight > 0.0 && result.activations[s.source] > 0.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bf::bf_v1;
    use crate::graph::graph_to_network;

    fn chain() -> Graph {
        Graph::from_triples(3, &[(0, 1, 3.0), (1, 2, 4.0)]).unwrap()
    }

    fn diamond() -> Graph {
        Graph::from_triples(3, &[(0, 1, 1.0), (0, 2, 5.0), (1, 2, -3.0)]).unwrap()
    }

    #[test]
    fn single_neuron() {
        let net = Network::new(1).unwrap();
        let r = nnbf_solve(&net, 0, true, None).unwrap();
        assert_eq!(r.activations, vec![1.0]);
        assert_eq!(r.max_inputs, vec![None]);
    }

    #[test]
    fn chain_activations() {
        let net = graph_to_network(&chain(), 100.0).unwrap();
        let r = nnbf_solve(&net, 0, true, None).unwrap();
        // 0.97 * 0.96, both factors and the product as computed in f64
        assert!((r.activations[1] - 0.97).abs() < 1e-15);
        assert!((r.activations[2] - 0.9312).abs() < 1e-15);
        assert_eq!(r.max_inputs, vec![None, Some(0), Some(1)]);
        assert!(r.converged);
        assert_eq!(
            reconstruct_path_from_max_inputs(&r, 2).unwrap(),
            Some(vec![0, 1, 2])
        );
        assert_eq!(reconstruct_path_from_max_inputs(&r, 0).unwrap(), Some(vec![0]));
    }

    #[test]
    fn diamond_prefers_negative_route() {
        let g = diamond();
        let net = graph_to_network(&g, 1e6).unwrap();
        let r = nnbf_solve(&net, 0, true, None).unwrap();
        let bf = bf_v1(&g, 0, true).unwrap();
        assert_eq!(r.max_inputs[2], Some(1));
        assert_eq!(r.max_inputs, bf.predecessors);
        assert!(r.activations[2] > 1.0);
    }

    #[test]
    fn isolated_target() {
        let g = Graph::from_triples(3, &[(0, 1, 1.0)]).unwrap();
        let r = nnbf_solve(&graph_to_network(&g, 100.0).unwrap(), 0, true, None).unwrap();
        assert_eq!(reconstruct_path_from_max_inputs(&r, 2).unwrap(), None);
    }

    #[test]
    fn source_clamped_after_sweep() {
        // 1 -> 0 carries a weight far above one
        let g = Graph::from_triples(2, &[(0, 1, -50.0), (1, 0, -50.0)]).unwrap();
        let net = graph_to_network(&g, 100.0).unwrap();
        let r = nnbf_solve(&net, 0, false, Some(3)).unwrap();
        assert_eq!(r.activations[0], 1.0);
    }

    #[test]
    fn path_costs() {
        assert_eq!(path_cost(&chain(), &[0]).unwrap(), 0.0);
        assert_eq!(path_cost(&chain(), &[0, 1, 2]).unwrap(), 7.0);
        assert_eq!(path_cost(&diamond(), &[0, 1, 2]).unwrap(), -2.0);
        assert_eq!(path_cost(&chain(), &[0, 2]), Err(Error::MissingEdge(0, 2)));
        assert!(path_cost(&chain(), &[0, 9]).is_err());
    }

    #[test]
    fn tree_costs_match_bf() {
        let g = diamond();
        let net = graph_to_network(&g, 1e6).unwrap();
        let r = nnbf_solve(&net, 0, true, None).unwrap();
        let costs = tree_path_costs(&net, &r).unwrap();
        assert_eq!(costs, vec![Some(0.0), Some(1.0), Some(-2.0)]);
    }

    #[test]
    fn underflow_flagged() {
        let mut net = Network::new(3).unwrap();
        net.connect(0, 1, 1e-200).unwrap();
        net.connect(1, 2, 1e-200).unwrap();
        let r = nnbf_solve(&net, 0, true, None).unwrap();
        assert_eq!(r.activations[2], 0.0);
        assert_eq!(underflow_suspects(&net, &r), vec![2]);
    }

    #[test]
    fn invalid_source() {
        let net = Network::new(2).unwrap();
        assert!(nnbf_solve(&net, 2, true, None).is_err());
    }

    #[test]
    fn json_encoding() {
        let net = graph_to_network(&chain(), 100.0).unwrap();
        let v = nnbf_solve(&net, 0, true, None).unwrap().to_json();
        assert_eq!(v["max_inputs"], json!([null, 0, 1]));
        assert_eq!(v["converged"], json!(true));
    }
}
