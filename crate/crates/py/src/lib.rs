//! Python bindings. Graphs cross the boundary as a node count plus a list
//! of `(from, to, cost)` triples.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use pathweave::plasticity::{seq_learning_run, SequenceTask};
use pathweave::{
    bf_v1, bf_v2, generate_random_graph, graph_to_network, nnbf_solve, path_cost,
    reconstruct_path_from_max_inputs, GeneratorConfig, Graph,
};

fn err(e: pathweave::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn build(nodes: usize, edges: Vec<(usize, usize, f64)>) -> PyResult<Graph> {
    Graph::from_triples(nodes, &edges).map_err(err)
}

/// Random graph with positive integer costs in `[1, cost_max]`.
#[pyfunction]
#[pyo3(signature = (nodes, edge_prob, cost_max = 100.0, seed = 0))]
fn generate(nodes: usize, edge_prob: f64, cost_max: f64, seed: u64) -> PyResult<Vec<(usize, usize, f64)>> {
    let g = generate_random_graph(&GeneratorConfig::positive(nodes, edge_prob, cost_max, seed)).map_err(err)?;
    Ok(g.edges().iter().map(|e| (e.from, e.to, e.cost)).collect())
}

/// Bellman-Ford by edge (`version=1`) or node (`version=2`) relaxation.
#[pyfunction]
#[pyo3(signature = (nodes, edges, source, version = 1, early_stop = true))]
fn bellman_ford<'py>(
    py: Python<'py>,
    nodes: usize,
    edges: Vec<(usize, usize, f64)>,
    source: usize,
    version: u8,
    early_stop: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let g = build(nodes, edges)?;
    let r = match version {
        1 => bf_v1(&g, source, early_stop),
        2 => bf_v2(&g, source, early_stop),
        v => return Err(PyValueError::new_err(format!("version must be 1 or 2, got {v}"))),
    }
    .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("distances", r.distances)?;
    d.set_item("predecessors", r.predecessors)?;
    d.set_item("iterations", r.iterations_used)?;
    d.set_item("converged", r.converged)?;
    d.set_item("negative_cycle", r.negative_cycle_detected)?;
    Ok(d)
}

/// Activation propagation with weights `1 - cost / k`. With `target`, the
/// max-input path and its cost are included.
#[pyfunction]
#[pyo3(signature = (nodes, edges, source, k = pathweave::DEFAULT_K, target = None))]
fn nnbf<'py>(
    py: Python<'py>,
    nodes: usize,
    edges: Vec<(usize, usize, f64)>,
    source: usize,
    k: f64,
    target: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let g = build(nodes, edges)?;
    let net = graph_to_network(&g, k).map_err(err)?;
    let r = nnbf_solve(&net, source, true, None).map_err(err)?;
    let d = PyDict::new(py);
    if let Some(t) = target {
        let path = reconstruct_path_from_max_inputs(&r, t).map_err(err)?;
        let cost = match &path {
            Some(p) => path_cost(&g, p).map_err(err)?,
            None => f64::INFINITY,
        };
        d.set_item("path", path)?;
        d.set_item("cost", cost)?;
    }
    d.set_item("activations", r.activations)?;
    d.set_item("max_inputs", r.max_inputs)?;
    d.set_item("iterations", r.iterations_used)?;
    d.set_item("converged", r.converged)?;
    Ok(d)
}

/// Learns to plan `target` through the letters of `alphabet`.
#[pyfunction]
#[pyo3(signature = (target, seed = 0, alphabet = "ABCDEF"))]
fn learn_sequence<'py>(py: Python<'py>, target: &str, seed: u64, alphabet: &str) -> PyResult<Bound<'py, PyDict>> {
    let task = SequenceTask::new(alphabet, target, seed).map_err(err)?;
    let run = seq_learning_run(&task).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("converged_at", run.converged_at)?;
    d.set_item("plans", run.epochs.iter().map(|e| e.planned.clone()).collect::<Vec<_>>())?;
    Ok(d)
}

#[pymodule]
fn pathweave_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(bellman_ford, m)?)?;
    m.add_function(wrap_pyfunction!(nnbf, m)?)?;
    m.add_function(wrap_pyfunction!(learn_sequence, m)?)?;
    Ok(())
}
