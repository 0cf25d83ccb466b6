//! Solver properties against independent references.

mod common;

use proptest::prelude::*;

use common::{acyclic_negative_graph, brute_force_distances, has_negative_cycle};
use pathweave::{
    bf_v1, bf_v2, generate_random_graph, graph_to_network, nnbf_solve, path_cost,
    reconstruct_path, reconstruct_path_from_max_inputs, CostRange, GeneratorConfig, Graph,
    DEFAULT_K,
};

fn small_config(nodes: usize, p: f64, neg_prob: f64, seed: u64) -> GeneratorConfig {
    GeneratorConfig {
        node_count: nodes,
        edge_prob: p,
        pos_cost_range: CostRange::new(1.0, 20.0),
        neg_cost_range: CostRange::new(-5.0, -1.0),
        neg_prob,
        integer_costs: true,
        seed,
    }
}

fn triangle_consistent(graph: &Graph, d: &[f64]) -> bool {
    graph.edges().iter().all(|e| d[e.to] <= d[e.from] + e.cost)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn versions_agree_with_enumeration(
        nodes in 1usize..8,
        p in 0.1f64..1.0,
        neg in prop_oneof![Just(0.0), 0.0f64..0.4],
        seed in any::<u64>(),
    ) {
        let (graph, _) = acyclic_negative_graph(&small_config(nodes, p, neg, seed));
        let source = (seed % nodes as u64) as usize;
        let expected = brute_force_distances(&graph, source);
        let a = bf_v1(&graph, source, true).unwrap();
        let b = bf_v2(&graph, source, true).unwrap();
        prop_assert_eq!(&a.distances, &expected);
        prop_assert_eq!(&b.distances, &expected);
        prop_assert!(triangle_consistent(&graph, &a.distances));
        let budget = nodes.saturating_sub(1).max(1);
        prop_assert!(a.iterations_used <= budget && b.iterations_used <= budget);
        // a chain can use its whole budget with no quiet sweep left over
        prop_assert!(a.converged || a.iterations_used == budget);
        prop_assert!(!a.negative_cycle_detected && !b.negative_cycle_detected);
        for v in 0..nodes {
            let path = reconstruct_path(&a, v).unwrap();
            match path {
                Some(path) => prop_assert_eq!(path_cost(&graph, &path).unwrap(), expected[v]),
                None => prop_assert!(expected[v].is_infinite()),
            }
        }
    }

    #[test]
    fn nnbf_reaches_a_fixed_point(
        nodes in 1usize..12,
        p in 0.1f64..1.0,
        seed in any::<u64>(),
    ) {
        let graph = generate_random_graph(&small_config(nodes, p, 0.0, seed)).unwrap();
        let net = graph_to_network(&graph, DEFAULT_K).unwrap();
        let res = nnbf_solve(&net, 0, true, None).unwrap();
        prop_assert!(res.iterations_used <= nodes.saturating_sub(1).max(1));
        prop_assert_eq!(res.activations[0], 1.0);
        // once converged, a fresh run with one more sweep allowed changes nothing
        let longer = nnbf_solve(&net, 0, false, Some(res.iterations_used + 1)).unwrap();
        if res.converged {
            prop_assert_eq!(&longer.activations, &res.activations);
        }
        for a in &res.activations {
            prop_assert!((0.0..=1.0).contains(a));
        }
        let bf = bf_v1(&graph, 0, true).unwrap();
        for v in 0..nodes {
            let cost = reconstruct_path_from_max_inputs(&res, v)
                .unwrap()
                .map_or(f64::INFINITY, |path| path_cost(&graph, &path).unwrap());
            prop_assert_eq!(cost, bf.distances[v]);
        }
    }
}

#[test]
fn edge_count_follows_the_binomial() {
    // 9900 ordered pairs at p = 0.1: mean 990, sd about 30
    for seed in 0..50 {
        let g = generate_random_graph(&GeneratorConfig::positive(100, 0.1, 10.0, seed)).unwrap();
        assert!((800..=1180).contains(&g.edge_count()), "seed {seed}: {} edges", g.edge_count());
    }
}

#[test]
fn negative_edge_example() {
    // the direct edge costs 4, the detour 3 + (-2) = 1
    let g = Graph::from_triples(3, &[(0, 2, 4.0), (0, 1, 3.0), (1, 2, -2.0)]).unwrap();
    assert_eq!(bf_v1(&g, 0, true).unwrap().distances, vec![0.0, 3.0, 1.0]);
    let net = graph_to_network(&g, 10.0).unwrap();
    assert_eq!(net.weight(1, 2), Some(1.2));
    let res = nnbf_solve(&net, 0, true, None).unwrap();
    assert_eq!(reconstruct_path_from_max_inputs(&res, 2).unwrap(), Some(vec![0, 1, 2]));
}

#[test]
fn negative_cycle_is_flagged() {
    let g = Graph::from_triples(3, &[(0, 1, 1.0), (1, 2, -3.0), (2, 1, 1.0)]).unwrap();
    assert!(has_negative_cycle(&g));
    assert!(bf_v1(&g, 0, true).unwrap().negative_cycle_detected);
    assert!(bf_v2(&g, 0, true).unwrap().negative_cycle_detected);
}

#[test]
fn unreachable_nodes_stay_infinite() {
    let g = Graph::from_triples(4, &[(0, 1, 2.0), (2, 3, 1.0)]).unwrap();
    let r = bf_v1(&g, 0, true).unwrap();
    assert_eq!(r.distances, vec![0.0, 2.0, f64::INFINITY, f64::INFINITY]);
    let res = nnbf_solve(&graph_to_network(&g, DEFAULT_K).unwrap(), 0, true, None).unwrap();
    assert_eq!(res.activations[2], 0.0);
    assert_eq!(reconstruct_path_from_max_inputs(&res, 3).unwrap(), None);
}
