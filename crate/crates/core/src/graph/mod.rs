//! Directed weighted graphs and their network (neuron/synapse) view.

mod format;
mod generate;
mod network;

pub use format::{read_graph_file, write_graph_file, GraphFormat};
pub use generate::{generate_random_graph, CostRange, GeneratorConfig};
pub use network::{graph_to_network, Network, Synapse};

use std::collections::HashSet;

use crate::error::{Error, Result};

/// A directed edge `from -> to` with cost `cost`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub cost: f64,
}

impl Edge {
    pub fn new(from: usize, to: usize, cost: f64) -> Self {
        Edge { from, to, cost }
    }
}

/// Directed weighted graph stored as an edge list.
///
/// Edge order is significant: Bellman-Ford v1 relaxes edges in exactly this
/// order, and v2 / NN-BF see each vertex's incoming edges in this order.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph, rejecting out-of-range ids, self-loops, duplicate
    /// ordered pairs and non-finite costs.
    pub fn new(node_count: usize, edges: Vec<Edge>) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for e in &edges {
            for node in [e.from, e.to] {
                if node >= node_count {
                    return Err(Error::NodeOutOfRange { node, node_count });
                }
            }
            if e.from == e.to {
                return Err(Error::SelfLoop(e.from));
            }
            if !e.cost.is_finite() {
                return Err(Error::NonFiniteCost {
                    from: e.from,
                    to: e.to,
                    cost: e.cost,
                });
            }
            if !seen.insert((e.from, e.to)) {
                return Err(Error::DuplicateEdge(e.from, e.to));
            }
        }
        Ok(Graph { node_count, edges })
    }

    /// Convenience constructor from `(u, v, cost)` triples.
    pub fn from_triples(node_count: usize, triples: &[(usize, usize, f64)]) -> Result<Self> {
        Self::new(
            node_count,
            triples.iter().map(|&(u, v, c)| Edge::new(u, v, c)).collect(),
        )
    }

    /// Caller guarantees the invariants (generator output).
    pub(crate) fn new_unchecked(node_count: usize, edges: Vec<Edge>) -> Self {
        Graph { node_count, edges }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Fraction of the `|V|(|V|-1)` possible ordered pairs that carry an edge.
    pub fn density(&self) -> f64 {
        let n = self.node_count as f64;
        if self.node_count < 2 {
            0.0
        } else {
            self.edges.len() as f64 / (n * (n - 1.0))
        }
    }

    pub fn max_abs_cost(&self) -> f64 {
        self.edges.iter().fold(0.0, |m, e| m.max(e.cost.abs()))
    }

    /// Per-vertex incoming edges as `(from, cost)`, each list in edge-list order.
    pub fn incoming_index(&self) -> Vec<Vec<(usize, f64)>> {
        let mut incoming = vec![Vec::new(); self.node_count];
        for e in &self.edges {
            incoming[e.to].push((e.from, e.cost));
        }
        incoming
    }

    pub(crate) fn check_node(&self, node: usize) -> Result<()> {
        if node < self.node_count {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node,
                node_count: self.node_count,
            })
        }
    }
}

/// Transforms an edge cost into a connection weight, `1 - cost / k`.
pub fn cost_to_weight(cost: f64, k: f64) -> Result<f64> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidScale(k));
    }
    Ok(1.0 - cost / k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn weight_examples() {
        assert_eq!(cost_to_weight(0.0, 7.0).unwrap(), 1.0);
        assert_eq!(cost_to_weight(0.0, 1e6).unwrap(), 1.0);
        assert!((cost_to_weight(5.0, 100.0).unwrap() - 0.95).abs() < 1e-15);
        assert!((cost_to_weight(-10.0, 100.0).unwrap() - 1.1).abs() < 1e-15);
    }

    #[test]
    fn weight_rejects_bad_scale() {
        assert_eq!(cost_to_weight(1.0, 0.0), Err(Error::InvalidScale(0.0)));
        assert_eq!(cost_to_weight(1.0, -3.0), Err(Error::InvalidScale(-3.0)));
        assert!(cost_to_weight(1.0, f64::NAN).is_err());
    }

    #[test]
    fn graph_validation() {
        assert_eq!(Graph::new(0, vec![]), Err(Error::EmptyGraph));
        assert_eq!(
            Graph::from_triples(2, &[(0, 2, 1.0)]),
            Err(Error::NodeOutOfRange { node: 2, node_count: 2 })
        );
        assert_eq!(
            Graph::from_triples(2, &[(1, 1, 1.0)]),
            Err(Error::SelfLoop(1))
        );
        assert_eq!(
            Graph::from_triples(2, &[(0, 1, 1.0), (0, 1, 2.0)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert!(Graph::from_triples(2, &[(0, 1, f64::INFINITY)]).is_err());
        let g = Graph::from_triples(2, &[(0, 1, 1.0), (1, 0, 2.0)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.density(), 1.0);
    }

    proptest! {
        #[test]
        fn weight_round_trip(c in -1e6f64..1e6, k in 1e-3f64..1e9) {
            let w = cost_to_weight(c, k).unwrap();
            let back = k * (1.0 - w);
            // one ulp of the larger intermediate magnitude
            let tol = f64::EPSILON * k.max(c.abs()) * 2.0;
            prop_assert!((back - c).abs() <= tol, "c={c} k={k} back={back}");
        }

        #[test]
        fn weight_monotone(a in -1e4f64..1e4, b in -1e4f64..1e4, k in 1e-2f64..1e7) {
            prop_assume!(a < b);
            let (wa, wb) = (cost_to_weight(a, k).unwrap(), cost_to_weight(b, k).unwrap());
            // strict unless the difference is below weight resolution
            if (b - a) / k > 4.0 * f64::EPSILON {
                prop_assert!(wa > wb);
            } else {
                prop_assert!(wa >= wb);
            }
        }
    }
}
