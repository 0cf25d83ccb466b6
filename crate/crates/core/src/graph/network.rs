use super::{cost_to_weight, Graph};
use crate::error::{Error, Result};

/// Incoming connection of a neuron: presynaptic neuron and weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Synapse {
    pub source: usize,
    pub weight: f64,
}

/// Neurons with per-neuron incoming connection lists.
///
/// A network built from a graph keeps the originating edge cost of every
/// connection so path costs can be audited without inverting products.
/// Adding connections afterwards (learning scenarios) drops that record.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    incoming: Vec<Vec<Synapse>>,
    costs: Option<Vec<Vec<f64>>>,
}

impl Network {
    /// A network with `neuron_count` neurons and no connections.
    pub fn new(neuron_count: usize) -> Result<Self> {
        if neuron_count == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(Network {
            incoming: vec![Vec::new(); neuron_count],
            costs: None,
        })
    }

    pub fn neuron_count(&self) -> usize {
        self.incoming.len()
    }

    pub fn connection_count(&self) -> usize {
        self.incoming.iter().map(Vec::len).sum()
    }

    pub fn incoming(&self, neuron: usize) -> &[Synapse] {
        &self.incoming[neuron]
    }

    /// Original edge cost of the `slot`-th incoming connection of `neuron`.
    pub fn connection_cost(&self, neuron: usize, slot: usize) -> Option<f64> {
        self.costs.as_ref().map(|c| c[neuron][slot])
    }

    pub fn has_costs(&self) -> bool {
        self.costs.is_some()
    }

    /// Cost of the connection `pre -> post`, when the network retains costs.
    pub fn cost(&self, pre: usize, post: usize) -> Option<f64> {
        let slot = self.slot(pre, post)?;
        self.connection_cost(post, slot)
    }

    pub fn weight(&self, pre: usize, post: usize) -> Option<f64> {
        self.slot(pre, post).map(|s| self.incoming[post][s].weight)
    }

    pub fn set_weight(&mut self, pre: usize, post: usize, weight: f64) -> Result<()> {
        let slot = self.slot(pre, post).ok_or(Error::MissingEdge(pre, post))?;
        self.incoming[post][slot].weight = weight;
        Ok(())
    }

    /// Adds the connection `pre -> post`.
    pub fn connect(&mut self, pre: usize, post: usize, weight: f64) -> Result<()> {
        self.check(pre)?;
        self.check(post)?;
        if pre == post {
            return Err(Error::SelfLoop(pre));
        }
        if self.slot(pre, post).is_some() {
            return Err(Error::DuplicateEdge(pre, post));
        }
        self.costs = None;
        self.incoming[post].push(Synapse {
            source: pre,
            weight,
        });
        Ok(())
    }

    /// All connections as `(pre, post, weight)`, post-major in slot order.
    pub fn connections(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.incoming
            .iter()
            .enumerate()
            .flat_map(|(post, syn)| syn.iter().map(move |s| (s.source, post, s.weight)))
    }

    fn slot(&self, pre: usize, post: usize) -> Option<usize> {
        self.incoming
            .get(post)?
            .iter()
            .position(|s| s.source == pre)
    }

    fn check(&self, neuron: usize) -> Result<()> {
        if neuron < self.incoming.len() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: neuron,
                node_count: self.incoming.len(),
            })
        }
    }
}

/// Builds the network view of `graph`: edge `(u, v, c)` becomes an incoming
/// connection of neuron `v` from neuron `u` with weight `1 - c / k`.
pub fn graph_to_network(graph: &Graph, k: f64) -> Result<Network> {
    let n = graph.node_count();
    let mut incoming: Vec<Vec<Synapse>> = vec![Vec::new(); n];
    let mut costs: Vec<Vec<f64>> = vec![Vec::new(); n];
    for e in graph.edges() {
        incoming[e.to].push(Synapse {
            source: e.from,
            weight: cost_to_weight(e.cost, k)?,
        });
        costs[e.to].push(e.cost);
    }
    Ok(Network {
        incoming,
        costs: Some(costs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_random_graph, GeneratorConfig};

    #[test]
    fn empty_graph_gives_empty_lists() {
        let g = Graph::new(3, vec![]).unwrap();
        let net = graph_to_network(&g, 100.0).unwrap();
        assert_eq!(net.neuron_count(), 3);
        assert!((0..3).all(|i| net.incoming(i).is_empty()));
    }

    #[test]
    fn single_edge() {
        let g = Graph::from_triples(2, &[(0, 1, 50.0)]).unwrap();
        let net = graph_to_network(&g, 100.0).unwrap();
        assert_eq!(net.incoming(1), &[Synapse { source: 0, weight: 0.5 }]);
        assert!(net.incoming(0).is_empty());
        assert_eq!(net.cost(0, 1), Some(50.0));
    }

    #[test]
    fn complete_graph_weights_in_band() {
        let g = generate_random_graph(&GeneratorConfig::positive(4, 1.0, 100.0, 11)).unwrap();
        let k = 1e6;
        let net = graph_to_network(&g, k).unwrap();
        assert_eq!(net.connection_count(), 12);
        let c_max = g.max_abs_cost();
        // enumerate every edge and check its transformed weight
        for e in g.edges() {
            let w = net.weight(e.from, e.to).unwrap();
            assert_eq!(w, 1.0 - e.cost / k);
            assert!(w >= 1.0 - c_max / k && w < 1.0);
        }
    }

    #[test]
    fn rejects_bad_scale() {
        let g = Graph::from_triples(2, &[(0, 1, 5.0)]).unwrap();
        assert!(graph_to_network(&g, 0.0).is_err());
    }

    #[test]
    fn connect_and_update() {
        let mut net = Network::new(3).unwrap();
        net.connect(0, 1, 0.0).unwrap();
        assert_eq!(net.connect(0, 1, 0.2), Err(Error::DuplicateEdge(0, 1)));
        assert_eq!(net.connect(2, 2, 0.2), Err(Error::SelfLoop(2)));
        assert!(net.connect(0, 3, 0.2).is_err());
        net.set_weight(0, 1, 0.4).unwrap();
        assert_eq!(net.weight(0, 1), Some(0.4));
        assert_eq!(net.set_weight(1, 0, 0.4), Err(Error::MissingEdge(1, 0)));
        assert!(!net.has_costs());
    }
}
