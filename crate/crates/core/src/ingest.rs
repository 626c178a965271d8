//! Edge-list ingestion and power-law exponent fitting.
//!
//! Input files are SNAP-style: whitespace-separated integer pairs, one edge
//! per line, `#` lines ignored. Arbitrary vertex labels are remapped to
//! dense ids by sorted label order, so shuffled copies of the same file
//! produce identical graphs, and the label table is kept for reporting
//! results in the original ids.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexId};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Fit(#[from] FitError),
}

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("power-law fit needs at least {needed} tail degrees, got {got}")]
    TailTooSmall { needed: usize, got: usize },
    #[error("degenerate degree sequence: all tail degrees equal {0}")]
    DegenerateTail(usize),
}

/// A graph together with the original labels of its dense vertex ids.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: Vec<u64>,
}

impl LabeledGraph {
    pub fn original_label(&self, v: VertexId) -> u64 {
        self.labels[v as usize]
    }

    /// Wraps an already-dense graph with identity labels.
    pub fn dense(graph: Graph) -> LabeledGraph {
        let labels = (0..graph.vertex_count() as u64).collect();
        LabeledGraph { graph, labels }
    }
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<LabeledGraph, IngestError> {
    read_edge_list_from(BufReader::new(File::open(path)?))
}

pub fn read_edge_list_from(reader: impl BufRead) -> Result<LabeledGraph, IngestError> {
    let mut raw_edges: Vec<(u64, u64)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<u64, IngestError> {
            tok.ok_or(())
                .and_then(|t| t.parse::<u64>().map_err(|_| ()))
                .map_err(|_| IngestError::Parse {
                    line: idx + 1,
                    message: format!("expected two integer vertex ids, got {line:?}"),
                })
        };
        let u = parse(tokens.next())?;
        let v = parse(tokens.next())?;
        if tokens.next().is_some() {
            return Err(IngestError::Parse {
                line: idx + 1,
                message: format!("trailing tokens after edge pair in {line:?}"),
            });
        }
        raw_edges.push((u, v));
    }

    let mut labels: Vec<u64> = raw_edges
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .collect();
    labels.sort_unstable();
    labels.dedup();
    let dense = |label: u64| -> VertexId {
        labels.binary_search(&label).expect("label was collected") as VertexId
    };
    let edges: Vec<(VertexId, VertexId)> = raw_edges
        .iter()
        .map(|&(u, v)| (dense(u), dense(v)))
        .collect();
    let graph = Graph::from_edges(labels.len(), edges).expect("dense ids are in range");
    Ok(LabeledGraph { graph, labels })
}

/// Summary statistics of an ingested data set.
#[derive(Debug, Clone, Serialize)]
pub struct DatasetStats {
    pub n: usize,
    pub m: usize,
    /// Mean degree `2m / n`; stands in for the model's `mu` on real data.
    pub mean_degree: f64,
    pub tau_hat: f64,
    pub d_min: usize,
    pub tail_size: usize,
}

pub fn dataset_stats(g: &Graph) -> Result<DatasetStats, IngestError> {
    let degrees: Vec<usize> = g.degrees().collect();
    let fit = fit_tau(&degrees, None)?;
    let n = g.vertex_count();
    let m = g.edge_count();
    Ok(DatasetStats {
        n,
        m,
        mean_degree: 2.0 * m as f64 / n as f64,
        tau_hat: fit.tau_hat,
        d_min: fit.d_min,
        tail_size: fit.tail_size,
    })
}

/// Result of the power-law tail fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauFit {
    pub tau_hat: f64,
    pub d_min: usize,
    pub tail_size: usize,
    pub ks_distance: f64,
}

/// Minimum number of tail observations required for a fit.
pub const MIN_TAIL: usize = 50;

/// Fits the tail exponent of a degree sequence by the continuous maximum
/// likelihood approximation (Clauset-style):
/// `tau_hat = 1 + N / sum(ln(d_i / (d_min - 1/2)))` over `d_i >= d_min`.
///
/// With `d_min` given the fit is direct; otherwise every feasible cutoff is
/// scanned and the one minimizing the Kolmogorov-Smirnov distance between
/// the empirical tail and the fitted law wins.
pub fn fit_tau(degrees: &[usize], d_min: Option<usize>) -> Result<TauFit, FitError> {
    let mut sorted: Vec<usize> = degrees.iter().copied().filter(|&d| d > 0).collect();
    sorted.sort_unstable();
    match d_min {
        Some(d) => fit_at(&sorted, d.max(1)),
        None => {
            let mut candidates: Vec<usize> = sorted.clone();
            candidates.dedup();
            let mut best: Option<TauFit> = None;
            for &cand in &candidates {
                let Ok(fit) = fit_at(&sorted, cand) else {
                    continue;
                };
                if best.is_none_or(|b| fit.ks_distance < b.ks_distance) {
                    best = Some(fit);
                }
            }
            best.ok_or(FitError::TailTooSmall {
                needed: MIN_TAIL,
                got: sorted.len(),
            })
        }
    }
}

fn fit_at(sorted: &[usize], d_min: usize) -> Result<TauFit, FitError> {
    let start = sorted.partition_point(|&d| d < d_min);
    let tail = &sorted[start..];
    let n_tail = tail.len();
    if n_tail < MIN_TAIL {
        return Err(FitError::TailTooSmall {
            needed: MIN_TAIL,
            got: n_tail,
        });
    }
    if tail[0] == tail[n_tail - 1] {
        return Err(FitError::DegenerateTail(tail[0]));
    }
    let shift = d_min as f64 - 0.5;
    let log_sum: f64 = tail.iter().map(|&d| (d as f64 / shift).ln()).sum();
    let tau_hat = 1.0 + n_tail as f64 / log_sum;

    // KS distance between the empirical tail CCDF and the fitted one,
    // evaluated at each distinct tail value.
    let mut ks: f64 = 0.0;
    let mut i = 0;
    while i < n_tail {
        let value = tail[i];
        let empirical = (n_tail - i) as f64 / n_tail as f64;
        let model = ((value as f64 - 0.5) / shift).powf(1.0 - tau_hat);
        ks = ks.max((empirical - model).abs());
        while i < n_tail && tail[i] == value {
            i += 1;
        }
    }
    Ok(TauFit {
        tau_hat,
        d_min,
        tail_size: n_tail,
        ks_distance: ks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irg::{sample_weights, ModelParams};
    use crate::rng::stream_rng;
    use std::io::Cursor;

    #[test]
    fn reads_plain_pairs() {
        let lg = read_edge_list_from(Cursor::new("0 1\n1 2\n")).unwrap();
        assert_eq!(lg.graph.vertex_count(), 3);
        assert_eq!(lg.graph.edge_count(), 2);
        let degs: Vec<usize> = lg.graph.degrees().collect();
        assert_eq!(degs, vec![1, 2, 1]);
    }

    #[test]
    fn skips_comments_and_blank_lines() {
        let input = "# header\n# more\n\n10 20\n20 30\n";
        let lg = read_edge_list_from(Cursor::new(input)).unwrap();
        assert_eq!(lg.graph.vertex_count(), 3);
        assert_eq!(lg.labels, vec![10, 20, 30]);
        assert_eq!(lg.original_label(1), 20);
    }

    #[test]
    fn reports_malformed_line_number() {
        let input = "0 1\nnot an edge\n";
        let err = read_edge_list_from(Cursor::new(input)).unwrap_err();
        match err {
            IngestError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn symmetrizes_and_drops_loops() {
        let input = "5 5\n1 2\n2 1\n";
        let lg = read_edge_list_from(Cursor::new(input)).unwrap();
        assert_eq!(lg.graph.vertex_count(), 3); // labels 1, 2, 5
        assert_eq!(lg.graph.edge_count(), 1);
    }

    #[test]
    fn ingest_is_order_independent() {
        let a = read_edge_list_from(Cursor::new("7 3\n9 7\n3 9\n4 3\n")).unwrap();
        let b = read_edge_list_from(Cursor::new("3 4\n3 9\n7 9\n3 7\n")).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.labels, b.labels);
    }

    #[test]
    fn stats_mean_degree_exact() {
        let lg = read_edge_list_from(Cursor::new("0 1\n1 2\n2 0\n2 3\n")).unwrap();
        let g = &lg.graph;
        assert_eq!(2.0 * g.edge_count() as f64 / g.vertex_count() as f64, 2.0);
    }

    #[test]
    fn fit_recovers_exponent_on_integerized_pareto() {
        // Rounded exact Pareto sample; rounding is the discretization the
        // (d_min - 1/2) continuity correction is built for.
        let params = ModelParams::new(100_000, 2.5).unwrap();
        let w = sample_weights(&params, &mut stream_rng(51, 0));
        let degrees: Vec<usize> = w.iter().map(|&x| x.round() as usize).collect();
        let fit = fit_tau(&degrees, Some(6)).unwrap();
        assert!(
            (fit.tau_hat - 2.5).abs() < 0.05,
            "tau_hat = {}",
            fit.tau_hat
        );
        assert_eq!(fit.d_min, 6);
    }

    #[test]
    fn scan_picks_reasonable_cutoff() {
        let params = ModelParams::new(100_000, 2.5).unwrap();
        let w = sample_weights(&params, &mut stream_rng(52, 0));
        let degrees: Vec<usize> = w.iter().map(|&x| x.round() as usize).collect();
        let fit = fit_tau(&degrees, None).unwrap();
        assert!(
            (fit.tau_hat - 2.5).abs() < 0.1,
            "tau_hat = {} at d_min = {}",
            fit.tau_hat,
            fit.d_min
        );
    }

    #[test]
    fn constant_degrees_are_rejected() {
        let degrees = vec![4usize; 200];
        assert_eq!(
            fit_tau(&degrees, Some(4)).unwrap_err(),
            FitError::DegenerateTail(4)
        );
    }

    #[test]
    fn small_tail_is_rejected() {
        let degrees: Vec<usize> = (1..=40).collect();
        assert!(matches!(
            fit_tau(&degrees, Some(1)).unwrap_err(),
            FitError::TailTooSmall { .. }
        ));
    }
}
