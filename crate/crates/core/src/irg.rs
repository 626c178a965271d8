//! Inhomogeneous random graphs with power-law weights.
//!
//! Each vertex carries an i.i.d. Pareto weight with tail exponent
//! `tau - 1`; an edge joins two vertices independently with probability
//! `min(w_u * w_v / (mu * n), 1)` where `mu` is the theoretical mean of the
//! weight law. Two generators realize the same per-pair law: a quadratic
//! reference one and a linear-expected-time one (sorted-weight skip
//! sampling with rejection correction, after Miller and Hagberg).

use rand::Rng;
use thiserror::Error;

use crate::graph::{Graph, VertexId};

/// Largest `n` the quadratic reference generator will accept.
pub const NAIVE_MAX_N: usize = 20_000;

#[derive(Debug, Error, PartialEq)]
pub enum IrgError {
    #[error("tau must lie strictly between 2 and 3, got {0}")]
    TauOutOfRange(f64),
    #[error("minimum weight must be positive, got {0}")]
    BadMinWeight(f64),
    #[error("n={0} too large for the quadratic generator (max {NAIVE_MAX_N})")]
    NaiveTooLarge(usize),
}

/// Parameters of the weight law: `P(w > x) = (x / w_min)^(1 - tau)` for
/// `x >= w_min`, with `tau` in `(2, 3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n: usize,
    tau: f64,
    w_min: f64,
}

impl ModelParams {
    pub fn new(n: usize, tau: f64) -> Result<ModelParams, IrgError> {
        ModelParams::with_w_min(n, tau, 1.0)
    }

    pub fn with_w_min(n: usize, tau: f64, w_min: f64) -> Result<ModelParams, IrgError> {
        if !(tau > 2.0 && tau < 3.0) {
            return Err(IrgError::TauOutOfRange(tau));
        }
        if !(w_min > 0.0) {
            return Err(IrgError::BadMinWeight(w_min));
        }
        Ok(ModelParams { n, tau, w_min })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn w_min(&self) -> f64 {
        self.w_min
    }

    /// Theoretical mean of the weight law, `w_min * (tau - 1) / (tau - 2)`.
    /// This is the `mu` that enters the connection probability; using the
    /// theoretical rather than the empirical mean keeps runs comparable
    /// across seeds.
    pub fn mean_weight(&self) -> f64 {
        self.w_min * (self.tau - 1.0) / (self.tau - 2.0)
    }
}

/// Draws the i.i.d. Pareto weight vector by inverse-CDF sampling:
/// `w = w_min * u^(-1 / (tau - 1))` with `u` uniform on `(0, 1]`.
pub fn sample_weights<R: Rng + ?Sized>(params: &ModelParams, rng: &mut R) -> Vec<f64> {
    let exponent = -1.0 / (params.tau - 1.0);
    (0..params.n)
        .map(|_| {
            // random() is uniform on [0, 1); flip to (0, 1] so the power
            // never divides by zero.
            let u: f64 = 1.0 - rng.random::<f64>();
            params.w_min * u.powf(exponent)
        })
        .collect()
}

/// Probability of the edge between vertices of weights `wu`, `wv`.
pub fn edge_probability(wu: f64, wv: f64, mu: f64, n: usize) -> f64 {
    (wu * wv / (mu * n as f64)).min(1.0)
}

/// Reference generator: every unordered pair is tested independently.
/// Quadratic, so only available for small `n`.
pub fn generate_naive<R: Rng + ?Sized>(
    weights: &[f64],
    mu: f64,
    rng: &mut R,
) -> Result<Graph, IrgError> {
    let n = weights.len();
    if n > NAIVE_MAX_N {
        return Err(IrgError::NaiveTooLarge(n));
    }
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let p = edge_probability(weights[u], weights[v], mu, n);
            if rng.random::<f64>() < p {
                edges.push((u as VertexId, v as VertexId));
            }
        }
    }
    Ok(Graph::from_edges(n, edges).expect("generated ids are in range"))
}

/// Linear-expected-time generator with the same per-pair edge law as
/// [`generate_naive`].
///
/// Vertices are visited in order of decreasing weight; for a fixed `u` the
/// pair probability is non-increasing along the remaining vertices, so runs
/// of misses can be skipped geometrically under the current bound `p` and a
/// candidate at probability `q <= p` is kept with probability `q / p`.
pub fn generate_fast<R: Rng + ?Sized>(weights: &[f64], mu: f64, rng: &mut R) -> Graph {
    let n = weights.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        weights[b as usize]
            .partial_cmp(&weights[a as usize])
            .expect("weights are finite")
            .then(a.cmp(&b))
    });
    let sorted: Vec<f64> = order.iter().map(|&v| weights[v as usize]).collect();

    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    for u in 0..n {
        let mut v = u + 1;
        if v >= n {
            break;
        }
        let mut p = edge_probability(sorted[u], sorted[v], mu, n);
        while v < n && p > 0.0 {
            if p < 1.0 {
                let r: f64 = 1.0 - rng.random::<f64>();
                let skip = (r.ln() / (1.0 - p).ln()).floor();
                if skip >= (n - v) as f64 {
                    break;
                }
                v += skip as usize;
            }
            if v < n {
                let q = edge_probability(sorted[u], sorted[v], mu, n);
                if rng.random::<f64>() < q / p {
                    edges.push((order[u], order[v]));
                }
                p = q;
                v += 1;
            }
        }
    }
    Graph::from_edges(n, edges).expect("generated ids are in range")
}
