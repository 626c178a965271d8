//! Brute-force ground truth for tests.
//!
//! Everything here trades speed for being obviously correct: induced-copy
//! enumeration walks every injective mapping with no pruning, and the edge
//! frequency table just counts edges over repeated generation. Guards keep
//! callers from pointing these at instances where brute force blows up.

use itertools::Itertools;
use thiserror::Error;

use crate::graph::{Embedding, Graph, VertexId};
use crate::pattern::Pattern;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for brute force: n={n}, k={k}")]
    TooLarge { n: usize, k: usize },
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Enumerates every injective mapping of the pattern onto the graph that
/// satisfies the induced condition (edges and non-edges both preserved).
///
/// Raw mappings are returned, not automorphism classes, in deterministic
/// order: vertex subsets lexicographically, permutations within a subset
/// lexicographically.
pub fn enumerate_induced(g: &Graph, h: &Pattern) -> Result<Vec<Embedding>, OracleError> {
    let n = g.vertex_count();
    let k = h.k();
    if n > 30 && binomial(n, k) > 1_000_000 {
        return Err(OracleError::TooLarge { n, k });
    }
    let mut found = Vec::new();
    for subset in (0..n as VertexId).combinations(k) {
        for perm in subset.iter().copied().permutations(k) {
            let ok = (0..k).all(|a| {
                ((a + 1)..k).all(|b| h.has_edge(a, b) == g.has_edge(perm[a], perm[b]))
            });
            if ok {
                found.push(Embedding::new(perm));
            }
        }
    }
    Ok(found)
}

/// Distinct vertex sets among a list of embeddings.
pub fn distinct_images(embeddings: &[Embedding]) -> Vec<Vec<VertexId>> {
    let mut images: Vec<Vec<VertexId>> = embeddings.iter().map(|e| e.image_sorted()).collect();
    images.sort();
    images.dedup();
    images
}

/// Per-pair edge counts over repeated graph generation, for checking that a
/// generator realizes its per-pair inclusion probabilities.
pub struct EdgeFrequencyTable {
    n: usize,
    reps: u64,
    counts: Vec<u64>,
}

impl EdgeFrequencyTable {
    /// Generates `reps` graphs via `generate(rep_index)` and tallies each
    /// unordered pair.
    pub fn collect<F>(n: usize, reps: u64, mut generate: F) -> EdgeFrequencyTable
    where
        F: FnMut(u64) -> Graph,
    {
        assert!(n <= 200, "frequency table is quadratic in n");
        let mut counts = vec![0u64; n * (n - 1) / 2];
        for rep in 0..reps {
            let g = generate(rep);
            assert_eq!(g.vertex_count(), n);
            for u in 0..n as VertexId {
                for &v in g.neighbors(u) {
                    if v > u {
                        counts[Self::index(n, u, v)] += 1;
                    }
                }
            }
        }
        EdgeFrequencyTable { n, reps, counts }
    }

    fn index(n: usize, u: VertexId, v: VertexId) -> usize {
        let (u, v) = (u.min(v) as usize, u.max(v) as usize);
        // Row-major upper triangle.
        u * n - u * (u + 1) / 2 + (v - u - 1)
    }

    pub fn reps(&self) -> u64 {
        self.reps
    }

    pub fn frequency(&self, u: VertexId, v: VertexId) -> f64 {
        self.counts[Self::index(self.n, u, v)] as f64 / self.reps as f64
    }

    /// Checks every pair's observed frequency against an expected
    /// probability, within `sigmas` binomial standard deviations.
    pub fn verdicts<P>(&self, expected: P, sigmas: f64) -> Vec<PairVerdict>
    where
        P: Fn(VertexId, VertexId) -> f64,
    {
        let mut out = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for u in 0..self.n as VertexId {
            for v in (u + 1)..self.n as VertexId {
                let p = expected(u, v);
                let observed = self.frequency(u, v);
                let sd = (p * (1.0 - p) / self.reps as f64).sqrt();
                let within = (observed - p).abs() <= sigmas * sd + f64::EPSILON;
                out.push(PairVerdict {
                    u,
                    v,
                    expected: p,
                    observed,
                    within,
                });
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PairVerdict {
    pub u: VertexId,
    pub v: VertexId,
    pub expected: f64,
    pub observed: f64,
    pub within: bool,
}
