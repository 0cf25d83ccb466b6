//! Graph file formats.
//!
//! Edge-list text:
//!
//! ```text
//! # comment
//! nodes 3
//! 0 1 3
//! 1 2 4   # trailing comments are fine
//! ```
//!
//! JSON: `{"nodes": 3, "edges": [[0, 1, 3.0], [1, 2, 4.0]]}`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Edge, Graph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Json,
}

impl GraphFormat {
    /// `.json` selects JSON, anything else the edge-list text format.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => GraphFormat::Json,
            _ => GraphFormat::EdgeList,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    nodes: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(16 + self.edge_count() * 12);
        writeln!(out, "nodes {}", self.node_count()).unwrap();
        for e in self.edges() {
            writeln!(out, "{} {} {}", e.from, e.to, e.cost).unwrap();
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut node_count = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match node_count {
                None => {
                    if tokens.len() != 2 || tokens[0] != "nodes" {
                        return Err(parse_err("expected header `nodes N`".into()));
                    }
                    let n = tokens[1]
                        .parse::<usize>()
                        .map_err(|e| parse_err(format!("bad node count: {e}")))?;
                    node_count = Some(n);
                }
                Some(_) => {
                    if tokens.len() != 3 {
                        return Err(parse_err(format!(
                            "expected `u v cost`, got {} fields",
                            tokens.len()
                        )));
                    }
                    let u = tokens[0]
                        .parse::<usize>()
                        .map_err(|e| parse_err(format!("bad source id: {e}")))?;
                    let v = tokens[1]
                        .parse::<usize>()
                        .map_err(|e| parse_err(format!("bad target id: {e}")))?;
                    let c = tokens[2]
                        .parse::<f64>()
                        .map_err(|e| parse_err(format!("bad cost: {e}")))?;
                    edges.push(Edge::new(u, v, c));
                }
            }
        }
        let n = node_count.ok_or(Error::Parse {
            line: 0,
            message: "missing `nodes N` header".into(),
        })?;
        Graph::new(n, edges)
    }

    pub fn to_json(&self) -> String {
        let doc = GraphJson {
            nodes: self.node_count(),
            edges: self.edges().iter().map(|e| (e.from, e.to, e.cost)).collect(),
        };
        serde_json::to_string(&doc).expect("graph serialises")
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let doc: GraphJson = serde_json::from_str(text)?;
        Graph::from_triples(doc.nodes, &doc.edges)
    }
}

pub fn read_graph_file(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    match GraphFormat::from_path(path) {
        GraphFormat::Json => Graph::parse_json(&text),
        GraphFormat::EdgeList => Graph::parse_edge_list(&text),
    }
}

pub fn write_graph_file(graph: &Graph, path: &Path) -> Result<()> {
    let text = match GraphFormat::from_path(path) {
        GraphFormat::Json => graph.to_json() + "\n",
        GraphFormat::EdgeList => graph.to_edge_list(),
    };
    std::fs::write(path, text)?;
    Ok(())
}
