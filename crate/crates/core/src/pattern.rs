//! Connected patterns on 3..=16 vertices and their spanning-tree expansion
//! orders.
//!
//! A pattern is a small connected graph stored as a symmetric bit matrix.
//! [`Pattern::expansion_order`] derives the anchor sequence that the
//! neighborhood-growth search uses: growing a candidate set along the
//! anchors guarantees the set carries a spanning tree of the pattern.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{BitAdjacency, MAX_SET};

pub const MIN_K: usize = 3;
pub const MAX_K: usize = MAX_SET;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern size {0} outside supported range {MIN_K}..={MAX_K}")]
    KOutOfRange(usize),
    #[error("pattern vertex {vertex} out of range for k={k}")]
    VertexOutOfRange { vertex: usize, k: usize },
    #[error("pattern has a self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("pattern is not connected")]
    Disconnected,
    #[error("invalid pattern literal: {0}")]
    BadLiteral(String),
}

/// Connected undirected pattern on `k` vertices, `3 <= k <= 16`.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Pattern {
    bits: BitAdjacency,
}

impl Pattern {
    pub fn from_edges(k: usize, edges: &[(usize, usize)]) -> Result<Pattern, PatternError> {
        if !(MIN_K..=MAX_K).contains(&k) {
            return Err(PatternError::KOutOfRange(k));
        }
        let mut bits = BitAdjacency::empty(k);
        for &(u, v) in edges {
            if u >= k {
                return Err(PatternError::VertexOutOfRange { vertex: u, k });
            }
            if v >= k {
                return Err(PatternError::VertexOutOfRange { vertex: v, k });
            }
            if u == v {
                return Err(PatternError::SelfLoop(u));
            }
            bits.set(u, v);
        }
        let p = Pattern { bits };
        if !p.is_connected() {
            return Err(PatternError::Disconnected);
        }
        Ok(p)
    }

    /// Cycle `0-1-...-(k-1)-0`.
    pub fn cycle(k: usize) -> Result<Pattern, PatternError> {
        let edges: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k.max(1))).collect();
        Pattern::from_edges(k, &edges)
    }

    /// Complete graph on `k` vertices.
    pub fn clique(k: usize) -> Result<Pattern, PatternError> {
        let mut edges = Vec::new();
        for i in 0..k {
            for j in (i + 1)..k {
                edges.push((i, j));
            }
        }
        Pattern::from_edges(k, &edges)
    }

    /// Star with center `0` and `k - 1` leaves.
    pub fn star(k: usize) -> Result<Pattern, PatternError> {
        let edges: Vec<(usize, usize)> = (1..k).map(|i| (0, i)).collect();
        Pattern::from_edges(k, &edges)
    }

    /// The five-vertex house: the 4-cycle `0-1-2-3-0` with a roof vertex `4`
    /// adjacent to the neighboring cycle vertices `2` and `3`.
    pub fn house() -> Pattern {
        Pattern::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (3, 4)])
            .expect("house pattern is valid")
    }

    /// Parses either a named pattern (`house`, `cycle5`, `clique4`,
    /// `star6`) or a literal in the `k;u-v,u-v,...` format.
    pub fn from_spec(spec: &str) -> Result<Pattern, PatternError> {
        if spec.contains(';') {
            return spec.parse();
        }
        match spec {
            "house" => return Ok(Pattern::house()),
            _ => {}
        }
        for (prefix, make) in [
            ("cycle", Pattern::cycle as fn(usize) -> Result<Pattern, PatternError>),
            ("clique", Pattern::clique),
            ("star", Pattern::star),
        ] {
            if let Some(rest) = spec.strip_prefix(prefix) {
                let k: usize = rest
                    .parse()
                    .map_err(|_| PatternError::BadLiteral(spec.to_string()))?;
                return make(k);
            }
        }
        Err(PatternError::BadLiteral(spec.to_string()))
    }

    pub fn k(&self) -> usize {
        self.bits.k()
    }

    pub fn edge_count(&self) -> usize {
        (self.bits.edge_bits() / 2) as usize
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.bits.has(a, b)
    }

    pub fn degree(&self, a: usize) -> usize {
        self.bits.degree_of(a) as usize
    }

    pub fn bits(&self) -> &BitAdjacency {
        &self.bits
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for a in 0..self.k() {
            for b in (a + 1)..self.k() {
                if self.has_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn is_connected(&self) -> bool {
        let k = self.k();
        let mut seen: u16 = 1;
        let mut frontier: u16 = 1;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= !(1 << v);
            let fresh = self.bits.row(v) & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen.count_ones() as usize == k
    }

    /// Derives a depth-first spanning tree of the pattern, encoded as the
    /// anchor sequence used by the neighborhood-growth search.
    ///
    /// The traversal starts at vertex 0 and always takes the lowest-index
    /// unvisited neighbor, so the result is deterministic: cycles yield the
    /// path order `[1, 2, ..., k-1]` and a star centered at 0 yields
    /// `[1, 1, ..., 1]`.
    pub fn expansion_order(&self) -> ExpansionOrder {
        let k = self.k();
        let mut vertices = Vec::with_capacity(k);
        let mut anchors = Vec::with_capacity(k - 1);
        let mut position = [0usize; MAX_SET];
        let mut visited: u16 = 1;
        vertices.push(0);
        position[0] = 1;
        let mut stack = vec![0usize];
        while let Some(&v) = stack.last() {
            let fresh = self.bits.row(v) & !visited;
            if fresh == 0 {
                stack.pop();
                continue;
            }
            let u = fresh.trailing_zeros() as usize;
            visited |= 1 << u;
            vertices.push(u);
            position[u] = vertices.len();
            anchors.push(position[v]);
            stack.push(u);
        }
        debug_assert_eq!(vertices.len(), k);
        ExpansionOrder { vertices, anchors }
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern({})", self)
    }
}

/// Renders the `k;u-v,u-v,...` literal form.
impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.k())?;
        for (i, (u, v)) in self.edges().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}-{}", u, v)?;
        }
        Ok(())
    }
}

impl FromStr for Pattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Pattern, PatternError> {
        let bad = || PatternError::BadLiteral(s.to_string());
        let (k_part, edges_part) = s.split_once(';').ok_or_else(bad)?;
        let k: usize = k_part.trim().parse().map_err(|_| bad())?;
        let mut edges = Vec::new();
        for item in edges_part.split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (u, v) = item.split_once('-').ok_or_else(bad)?;
            let u: usize = u.trim().parse().map_err(|_| bad())?;
            let v: usize = v.trim().parse().map_err(|_| bad())?;
            edges.push((u, v));
        }
        Pattern::from_edges(k, &edges)
    }
}

/// Growth schedule for a pattern: `anchors()[t - 1]` is the 1-based position
/// (within the growth sequence) of the vertex whose neighborhood supplies
/// the `(t + 1)`-th vertex. The implied edges form a spanning tree of the
/// pattern under the vertex labeling given by `vertices()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionOrder {
    vertices: Vec<usize>,
    anchors: Vec<usize>,
}

impl ExpansionOrder {
    pub fn k(&self) -> usize {
        self.vertices.len()
    }

    /// Pattern vertices in insertion order.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// 1-based anchor positions, length `k - 1`; entry `t - 1` lies in `1..=t`.
    pub fn anchors(&self) -> &[usize] {
        &self.anchors
    }

    /// The spanning-tree edges in pattern-vertex labels.
    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        self.anchors
            .iter()
            .enumerate()
            .map(|(t, &a)| (self.vertices[a - 1], self.vertices[t + 1]))
            .collect()
    }
}
