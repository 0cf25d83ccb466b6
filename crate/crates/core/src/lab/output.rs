//! CSV tables. Floats use Rust's shortest round-trip formatting, so the same
//! data always produces the same bytes.

use std::io::Write;

use super::{ConvergenceReport, FamilyK0, K0Record, RuntimeRow};
use crate::error::{Error, Result};

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn write_rows<W: Write>(out: W, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let mut w = writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_k0_pairs_csv<W: Write>(out: W, records: &[K0Record]) -> Result<()> {
    let rows = records
        .iter()
        .map(|r| {
            vec![
                r.len_a.to_string(),
                r.len_b.to_string(),
                r.contrast.to_string(),
                r.k0.to_string(),
                r.seed.to_string(),
            ]
        })
        .collect();
    write_rows(out, &["L_A", "L_B", "contrast", "k0", "seed"], rows)
}

pub fn write_k0_graphs_csv<W: Write>(out: W, families: &[FamilyK0]) -> Result<()> {
    let rows = families
        .iter()
        .map(|f| {
            vec![
                f.nodes.to_string(),
                f.density.to_string(),
                f.cost_max.to_string(),
                f.max_k0().to_string(),
            ]
        })
        .collect();
    write_rows(out, &["nodes", "density", "cost_max", "max_k0"], rows)
}

/// One row per family and solver with the largest sweep count seen.
pub fn write_convergence_csv<W: Write>(out: W, report: &ConvergenceReport) -> Result<()> {
    let mut rows = Vec::new();
    for f in &report.families {
        for (solver, max) in [("bf1", f.max_bf), ("nnbf", f.max_nnbf)] {
            rows.push(vec![
                f.nodes.to_string(),
                f.density.to_string(),
                f.mean_edges.to_string(),
                solver.to_string(),
                max.to_string(),
            ]);
        }
    }
    write_rows(
        out,
        &["nodes", "density", "mean_edges", "solver", "max_iters"],
        rows,
    )
}

pub fn write_convergence_histogram_csv<W: Write>(out: W, report: &ConvergenceReport) -> Result<()> {
    let mut rows = Vec::new();
    for f in &report.families {
        for (solver, hist) in [("bf1", &f.histogram_bf), ("nnbf", &f.histogram_nnbf)] {
            for (iters, count) in hist {
                rows.push(vec![
                    f.nodes.to_string(),
                    f.density.to_string(),
                    solver.to_string(),
                    iters.to_string(),
                    count.to_string(),
                ]);
            }
        }
    }
    write_rows(
        out,
        &["nodes", "density", "solver", "iterations", "graphs"],
        rows,
    )
}

pub fn write_runtime_csv<W: Write>(out: W, rows: &[RuntimeRow]) -> Result<()> {
    let rows = rows
        .iter()
        .map(|r| {
            vec![
                r.nodes.to_string(),
                r.density.to_string(),
                r.edges.to_string(),
                r.solver.to_string(),
                r.mean.to_string(),
                r.stddev.to_string(),
            ]
        })
        .collect();
    write_rows(
        out,
        &["nodes", "density", "edges", "solver", "mean_s", "stddev_s"],
        rows,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_csv_bytes() {
        let recs = vec![
            K0Record {
                contrast: 0.5,
                k0: 12.25,
                len_a: 2,
                len_b: 5,
                seed: 7,
            },
            K0Record {
                contrast: 0.1,
                k0: f64::INFINITY,
                len_a: 1,
                len_b: 1,
                seed: 8,
            },
        ];
        let mut buf = Vec::new();
        write_k0_pairs_csv(&mut buf, &recs).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "L_A,L_B,contrast,k0,seed\n2,5,0.5,12.25,7\n1,1,0.1,inf,8\n"
        );
    }

    #[test]
    fn graphs_csv_uses_family_max() {
        let fams = vec![FamilyK0 {
            nodes: 10,
            density: 0.05,
            cost_max: 1000.0,
            graph_k0: vec![Some(1e3), Some(1e4)],
        }];
        let mut buf = Vec::new();
        write_k0_graphs_csv(&mut buf, &fams).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "nodes,density,cost_max,max_k0\n10,0.05,1000,10000\n"
        );
    }
}
