//! Immutable graph storage plus the induced-isomorphism check on a fixed
//! vertex set.
//!
//! Graphs are simple and undirected, stored in compressed sparse row form
//! with sorted neighbor lists. Construction normalizes arbitrary edge lists
//! (self-loops dropped, duplicates and reversed duplicates merged), so the
//! same graph is produced no matter how the input is ordered.

use thiserror::Error;

use crate::pattern::Pattern;

/// Dense vertex identifier, `0..n`.
pub type VertexId = u32;

/// Patterns and candidate sets are capped at this many vertices so their
/// adjacency fits in a row of `u16` bits.
pub const MAX_SET: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex id {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("vertex set has {got} vertices, expected {expected}")]
    WrongSetSize { expected: usize, got: usize },
    #[error("vertex {0} appears twice in the vertex set")]
    DuplicateVertex(VertexId),
    #[error("vertex set of size {0} exceeds the supported maximum of {MAX_SET}")]
    SetTooLarge(usize),
}

/// Immutable simple undirected graph in CSR form.
///
/// Invariants: no self-loops, no parallel edges, neighbor lists sorted
/// ascending, adjacency symmetric. `edge_count` counts each undirected edge
/// once.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    adjacency: Vec<VertexId>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph on `n` vertices from an arbitrary list of endpoint
    /// pairs. Self-loops are dropped; duplicate and reversed-duplicate pairs
    /// collapse to a single edge.
    pub fn from_edges<I>(n: usize, pairs: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
        for (u, v) in pairs {
            if u as usize >= n {
                return Err(GraphError::VertexOutOfRange { vertex: u, n });
            }
            if v as usize >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                continue;
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        edges.dedup();

        let mut degrees = vec![0usize; n];
        for &(u, v) in &edges {
            degrees[u as usize] += 1;
            degrees[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &degrees {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor: Vec<usize> = offsets[..n].to_vec();
        let mut adjacency = vec![0 as VertexId; acc];
        for &(u, v) in &edges {
            adjacency[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            adjacency[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        // The u-side entries land sorted, the v-side entries do not.
        for v in 0..n {
            adjacency[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Ok(Graph {
            offsets,
            adjacency,
            edge_count: edges.len(),
        })
    }

    /// Builds the graph from per-vertex neighbor lists that already satisfy
    /// the invariants (sorted, symmetric, loop-free). Used by the induced
    /// subgraph constructor where re-normalizing would be wasted work.
    pub(crate) fn from_sorted_lists(lists: Vec<Vec<VertexId>>) -> Graph {
        let n = lists.len();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for l in &lists {
            debug_assert!(l.windows(2).all(|w| w[0] < w[1]));
            acc += l.len();
            offsets.push(acc);
        }
        let mut adjacency = Vec::with_capacity(acc);
        for l in &lists {
            adjacency.extend_from_slice(l);
        }
        Graph {
            offsets,
            adjacency,
            edge_count: acc / 2,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges, each counted once.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Edge membership by binary search on the sorted neighbor list.
    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.offsets.windows(2).map(|w| w[1] - w[0])
    }

    /// Adjacency among the vertices of `set`, as a bit matrix indexed by
    /// position in `set`.
    pub fn induced_adjacency(&self, set: &[VertexId]) -> Result<BitAdjacency, GraphError> {
        let k = set.len();
        if k > MAX_SET {
            return Err(GraphError::SetTooLarge(k));
        }
        self.validate_set(set)?;
        let mut bits = BitAdjacency::empty(k);
        for i in 0..k {
            for j in (i + 1)..k {
                if self.has_edge(set[i], set[j]) {
                    bits.set(i, j);
                }
            }
        }
        Ok(bits)
    }

    fn validate_set(&self, set: &[VertexId]) -> Result<(), GraphError> {
        let n = self.vertex_count();
        for (i, &v) in set.iter().enumerate() {
            if v as usize >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if set[..i].contains(&v) {
                return Err(GraphError::DuplicateVertex(v));
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.vertex_count())
            .field("m", &self.edge_count)
            .finish()
    }
}

/// Symmetric adjacency bits for up to [`MAX_SET`] vertices, zero diagonal.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BitAdjacency {
    k: usize,
    rows: [u16; MAX_SET],
}

impl BitAdjacency {
    pub fn empty(k: usize) -> BitAdjacency {
        assert!(k <= MAX_SET);
        BitAdjacency {
            k,
            rows: [0; MAX_SET],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn set(&mut self, i: usize, j: usize) {
        debug_assert!(i != j && i < self.k && j < self.k);
        self.rows[i] |= 1 << j;
        self.rows[j] |= 1 << i;
    }

    pub fn has(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.k && j < self.k);
        self.rows[i] & (1 << j) != 0
    }

    pub fn row(&self, i: usize) -> u16 {
        self.rows[i]
    }

    pub fn degree_of(&self, i: usize) -> u32 {
        self.rows[i].count_ones()
    }

    pub fn edge_bits(&self) -> u32 {
        self.rows[..self.k].iter().map(|r| r.count_ones()).sum()
    }
}

/// Injective map from pattern vertices `0..k` to graph vertices, witnessing
/// an induced copy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding(Vec<VertexId>);

impl Embedding {
    pub fn new(map: Vec<VertexId>) -> Embedding {
        Embedding(map)
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// Graph vertex the pattern vertex `a` maps to.
    pub fn image_of(&self, a: usize) -> VertexId {
        self.0[a]
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn image_sorted(&self) -> Vec<VertexId> {
        let mut s = self.0.clone();
        s.sort_unstable();
        s
    }

    /// Re-checks the full biconditional edge condition against the host:
    /// every pattern edge maps to a host edge and every pattern non-edge to
    /// a host non-edge.
    pub fn is_valid(&self, g: &Graph, h: &Pattern) -> bool {
        if self.0.len() != h.k() {
            return false;
        }
        for (i, &v) in self.0.iter().enumerate() {
            if v as usize >= g.vertex_count() || self.0[..i].contains(&v) {
                return false;
            }
        }
        for a in 0..h.k() {
            for b in (a + 1)..h.k() {
                if h.has_edge(a, b) != g.has_edge(self.0[a], self.0[b]) {
                    return false;
                }
            }
        }
        true
    }
}

/// Tests whether the pattern `h` occurs as an induced subgraph on exactly
/// the vertex set `set`, returning a witnessing mapping if so.
///
/// The search runs over injective mappings with adjacency-consistency
/// pruning; with `set.len() <= 16` this is cheap. Both directions of the
/// induced condition are enforced: pattern edges must be present between
/// the images and pattern non-edges absent.
pub fn is_induced_copy(
    g: &Graph,
    set: &[VertexId],
    h: &Pattern,
) -> Result<Option<Embedding>, GraphError> {
    if set.len() != h.k() {
        return Err(GraphError::WrongSetSize {
            expected: h.k(),
            got: set.len(),
        });
    }
    let candidate = g.induced_adjacency(set)?;
    Ok(match_bits(h.bits(), &candidate).map(|assignment| {
        Embedding::new(assignment.iter().map(|&pos| set[pos]).collect())
    }))
}

/// Finds an isomorphism from `pattern` onto `candidate` (same vertex count),
/// returned as `assignment[pattern_vertex] = candidate_position`.
fn match_bits(pattern: &BitAdjacency, candidate: &BitAdjacency) -> Option<Vec<usize>> {
    let k = pattern.k();
    debug_assert_eq!(k, candidate.k());
    if pattern.edge_bits() != candidate.edge_bits() {
        return None;
    }
    let mut assignment = vec![usize::MAX; k];
    let mut used: u16 = 0;
    if assign(pattern, candidate, 0, &mut assignment, &mut used) {
        Some(assignment)
    } else {
        None
    }
}

fn assign(
    pattern: &BitAdjacency,
    candidate: &BitAdjacency,
    a: usize,
    assignment: &mut [usize],
    used: &mut u16,
) -> bool {
    let k = pattern.k();
    if a == k {
        return true;
    }
    for pos in 0..k {
        if *used & (1 << pos) != 0 {
            continue;
        }
        // An isomorphism preserves degrees within the induced subgraph.
        if pattern.degree_of(a) != candidate.degree_of(pos) {
            continue;
        }
        let consistent = (0..a).all(|b| pattern.has(a, b) == candidate.has(pos, assignment[b]));
        if !consistent {
            continue;
        }
        assignment[a] = pos;
        *used |= 1 << pos;
        if assign(pattern, candidate, a + 1, assignment, used) {
            return true;
        }
        *used &= !(1 << pos);
        assignment[a] = usize::MAX;
    }
    false
}
