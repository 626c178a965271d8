//! Degree-window selection and the two randomized induced-subgraph
//! searches.
//!
//! Both searches first restrict the host graph to the vertices whose
//! degrees fall in a window ([`select_vertices`]). [`algorithm1`] then
//! shuffles the survivors and tests disjoint k-sets; [`algorithm2`] grows
//! candidate sets one neighbor at a time along the pattern's expansion
//! order, so every completed candidate already carries a spanning tree of
//! the pattern.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::graph::{is_induced_copy, Embedding, Graph, VertexId};
use crate::pattern::Pattern;

#[derive(Debug, Error, PartialEq)]
pub enum WindowError {
    #[error("window bounds must satisfy 0 <= lo <= hi, got [{lo}, {hi}]")]
    BadBounds { lo: f64, hi: f64 },
    #[error("window fractions must satisfy 0 <= f1 < f2, got f1={f1}, f2={f2}")]
    BadFractions { f1: f64, f2: f64 },
    #[error("gamma must lie in (0, 1], got {0}")]
    GammaOutOfRange(f64),
    #[error("mean degree must be positive, got {0}")]
    BadMean(f64),
    #[error("graph size {0} too small for this window")]
    BadSize(usize),
}

/// Closed interval of degrees. `hi` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeWindow {
    lo: f64,
    hi: f64,
}

impl DegreeWindow {
    pub fn new(lo: f64, hi: f64) -> Result<DegreeWindow, WindowError> {
        if !(lo >= 0.0 && hi >= lo) || lo.is_nan() || hi.is_nan() {
            return Err(WindowError::BadBounds { lo, hi });
        }
        Ok(DegreeWindow { lo, hi })
    }

    /// `[sqrt(f1 * mu * n), sqrt(f2 * mu * n)]`. `f2` may be infinite, which
    /// keeps every vertex above the lower bound; `f1 = 0` drops the lower
    /// bound.
    pub fn sqrt_window(f1: f64, f2: f64, mu: f64, n: usize) -> Result<DegreeWindow, WindowError> {
        if !(f1 >= 0.0 && f1 < f2) {
            return Err(WindowError::BadFractions { f1, f2 });
        }
        if !(mu > 0.0) {
            return Err(WindowError::BadMean(mu));
        }
        if n == 0 {
            return Err(WindowError::BadSize(n));
        }
        let scale = mu * n as f64;
        DegreeWindow::new((f1 * scale).sqrt(), (f2 * scale).sqrt())
    }

    /// `[(mu * n)^gamma / ln(n), (mu * n)^gamma]`, the variant tuned per
    /// data set on real networks.
    pub fn gamma_window(gamma: f64, mu: f64, n: usize) -> Result<DegreeWindow, WindowError> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(WindowError::GammaOutOfRange(gamma));
        }
        if !(mu > 0.0) {
            return Err(WindowError::BadMean(mu));
        }
        if n < 2 {
            return Err(WindowError::BadSize(n));
        }
        let hi = (mu * n as f64).powf(gamma);
        DegreeWindow::new(hi / (n as f64).ln(), hi)
    }

    /// The whole-graph window `[0, inf)`: no degree filtering at all.
    pub fn all() -> DegreeWindow {
        DegreeWindow {
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Integer-degree membership: the real interval restricted to integers
    /// is `[ceil(lo), floor(hi)]`.
    pub fn contains(&self, degree: usize) -> bool {
        let d = degree as f64;
        d >= self.lo && d <= self.hi
    }
}

impl std::fmt::Display for DegreeWindow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Vertices whose degree falls in the window, ascending. One O(n) pass.
pub fn select_vertices(g: &Graph, window: &DegreeWindow) -> Vec<VertexId> {
    let mut selected = Vec::new();
    for (v, d) in g.degrees().enumerate() {
        if window.contains(d) {
            selected.push(v as VertexId);
        }
    }
    selected
}

/// Result of one search run: the located embedding if any, the number of
/// induced-isomorphism checks executed, and the size of the degree-filtered
/// vertex set the search worked on.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub embedding: Option<Embedding>,
    pub checks: u64,
    pub selected: usize,
}

impl SearchOutcome {
    pub fn found(&self) -> bool {
        self.embedding.is_some()
    }

    fn failure(checks: u64, selected: usize) -> SearchOutcome {
        SearchOutcome {
            embedding: None,
            checks,
            selected,
        }
    }
}

/// Random-partition search: shuffle the degree-filtered vertices, split
/// them into `floor(|V'| / k)` disjoint k-sets (dropping the remainder) and
/// test each set until the pattern appears or the sets run out.
pub fn algorithm1<R: Rng + ?Sized>(
    g: &Graph,
    h: &Pattern,
    window: &DegreeWindow,
    rng: &mut R,
) -> SearchOutcome {
    let k = h.k();
    let mut selected = select_vertices(g, window);
    let selected_count = selected.len();
    if selected_count < k {
        return SearchOutcome::failure(0, selected_count);
    }
    selected.shuffle(rng);
    let mut checks = 0u64;
    for set in selected.chunks_exact(k) {
        checks += 1;
        let embedding =
            is_induced_copy(g, set, h).expect("partition sets are valid by construction");
        if embedding.is_some() {
            return SearchOutcome {
                embedding,
                checks,
                selected: selected_count,
            };
        }
    }
    SearchOutcome::failure(checks, selected_count)
}

/// Neighborhood-growth search: restrict the graph to the degree-filtered
/// vertices, then repeatedly seed a candidate at a uniform survivor and
/// grow it to size k by sampling, at step t, a uniform new neighbor of the
/// candidate's anchor vertex (the anchor sequence comes from the pattern's
/// spanning-tree expansion order, indexed by the candidate's current size).
/// Each completed candidate costs one induced-isomorphism check; an attempt
/// whose anchor has no eligible neighbor is abandoned and consumes budget
/// without a check.
pub fn algorithm2<R: Rng + ?Sized>(
    g: &Graph,
    h: &Pattern,
    window: &DegreeWindow,
    attempts: u64,
    rng: &mut R,
) -> SearchOutcome {
    let k = h.k();
    let selected = select_vertices(g, window);
    let selected_count = selected.len();
    if selected_count == 0 {
        return SearchOutcome::failure(0, selected_count);
    }
    let restricted = induce_on(g, &selected);
    let anchors = h.expansion_order().anchors().to_vec();

    let mut checks = 0u64;
    let mut candidate: Vec<VertexId> = Vec::with_capacity(k);
    let mut original: Vec<VertexId> = Vec::with_capacity(k);
    for _ in 0..attempts {
        candidate.clear();
        candidate.push(rng.random_range(0..selected_count as VertexId));
        while candidate.len() < k {
            let anchor = candidate[anchors[candidate.len() - 1] - 1];
            match sample_new_neighbor(&restricted, anchor, &candidate, rng) {
                Some(v) => candidate.push(v),
                None => break,
            }
        }
        if candidate.len() < k {
            continue;
        }
        checks += 1;
        original.clear();
        original.extend(candidate.iter().map(|&local| selected[local as usize]));
        let embedding =
            is_induced_copy(g, &original, h).expect("grown sets are valid by construction");
        if embedding.is_some() {
            return SearchOutcome {
                embedding,
                checks,
                selected: selected_count,
            };
        }
    }
    SearchOutcome::failure(checks, selected_count)
}

/// Induced subgraph on `kept` (ascending original ids), relabeled to local
/// ids `0..kept.len()`.
fn induce_on(g: &Graph, kept: &[VertexId]) -> Graph {
    debug_assert!(kept.windows(2).all(|w| w[0] < w[1]));
    let lists: Vec<Vec<VertexId>> = kept
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter_map(|u| kept.binary_search(u).ok().map(|local| local as VertexId))
                .collect()
        })
        .collect();
    Graph::from_sorted_lists(lists)
}

/// Uniform draw from the anchor's neighbors that are not yet in the
/// candidate, or None if every neighbor is taken.
fn sample_new_neighbor<R: Rng + ?Sized>(
    g: &Graph,
    anchor: VertexId,
    candidate: &[VertexId],
    rng: &mut R,
) -> Option<VertexId> {
    let neighbors = g.neighbors(anchor);
    let eligible = neighbors
        .iter()
        .filter(|v| !candidate.contains(v))
        .count();
    if eligible == 0 {
        return None;
    }
    let target = rng.random_range(0..eligible);
    neighbors
        .iter()
        .filter(|v| !candidate.contains(v))
        .nth(target)
        .copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    fn k3() -> Graph {
        Graph::from_edges(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn sqrt_window_values() {
        let w = DegreeWindow::sqrt_window(1.0 / (1e6f64).ln(), 0.9, 3.0, 1_000_000).unwrap();
        assert!((w.lo() - 465.9906).abs() < 1e-3, "lo = {}", w.lo());
        assert!((w.hi() - 1643.1677).abs() < 1e-3, "hi = {}", w.hi());
    }

    #[test]
    fn sqrt_window_rejects_equal_fractions() {
        let err = DegreeWindow::sqrt_window(0.5, 0.5, 3.0, 100).unwrap_err();
        assert_eq!(err, WindowError::BadFractions { f1: 0.5, f2: 0.5 });
    }

    #[test]
    fn sqrt_window_infinite_upper() {
        let w = DegreeWindow::sqrt_window(0.1, f64::INFINITY, 3.0, 100).unwrap();
        assert!(w.hi().is_infinite());
        assert!(w.contains(usize::MAX / 2));
        assert!(!w.contains(0));
    }

    #[test]
    fn gamma_window_values() {
        let w = DegreeWindow::gamma_window(0.5, 3.0, 1_000_000).unwrap();
        assert!((w.hi() - 1732.0508).abs() < 1e-3, "hi = {}", w.hi());
        assert!((w.lo() - 125.3700).abs() < 1e-3, "lo = {}", w.lo());
    }

    #[test]
    fn gamma_window_full_exponent() {
        let w = DegreeWindow::gamma_window(1.0, 3.0, 10).unwrap();
        assert!((w.hi() - 30.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_window_rejects_out_of_range() {
        assert!(DegreeWindow::gamma_window(0.0, 3.0, 100).is_err());
        assert!(DegreeWindow::gamma_window(1.1, 3.0, 100).is_err());
    }

    #[test]
    fn select_middle_of_path() {
        let p4 = Graph::from_edges(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let w = DegreeWindow::new(2.0, 2.0).unwrap();
        assert_eq!(select_vertices(&p4, &w), vec![1, 2]);
    }

    #[test]
    fn select_everything_with_all_window() {
        let g = Graph::from_edges(5, vec![(0, 1)]).unwrap();
        let picked = select_vertices(&g, &DegreeWindow::all());
        assert_eq!(picked, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn algorithm1_single_partition_success() {
        let h = Pattern::clique(3).unwrap();
        let w = DegreeWindow::new(2.0, 2.0).unwrap();
        let out = algorithm1(&k3(), &h, &w, &mut stream_rng(1, 0));
        assert!(out.found());
        assert_eq!(out.checks, 1);
        assert_eq!(out.selected, 3);
        assert!(out.embedding.unwrap().is_valid(&k3(), &h));
    }

    #[test]
    fn algorithm1_floors_partition_count() {
        // 7 selected vertices, k=4: exactly one set tested, 3 left over.
        // K7 contains no induced C4, so the single check fails.
        let mut edges = Vec::new();
        for i in 0..7u32 {
            for j in (i + 1)..7 {
                edges.push((i, j));
            }
        }
        let k7 = Graph::from_edges(7, edges).unwrap();
        let h = Pattern::cycle(4).unwrap();
        let out = algorithm1(&k7, &h, &DegreeWindow::all(), &mut stream_rng(2, 0));
        assert!(!out.found());
        assert_eq!(out.checks, 1);
        assert_eq!(out.selected, 7);
    }

    #[test]
    fn algorithm1_too_few_selected() {
        let h = Pattern::clique(3).unwrap();
        let w = DegreeWindow::new(5.0, 9.0).unwrap();
        let out = algorithm1(&k3(), &h, &w, &mut stream_rng(3, 0));
        assert!(!out.found());
        assert_eq!(out.checks, 0);
        assert_eq!(out.selected, 0);
    }

    #[test]
    fn algorithm2_triangle_single_attempt() {
        let h = Pattern::clique(3).unwrap();
        let w = DegreeWindow::new(2.0, 2.0).unwrap();
        let out = algorithm2(&k3(), &h, &w, 1, &mut stream_rng(4, 0));
        assert!(out.found());
        assert_eq!(out.checks, 1);
        assert!(out.embedding.unwrap().is_valid(&k3(), &h));
    }

    #[test]
    fn algorithm2_star_from_center_always_succeeds() {
        // On a star host with the star pattern the growth is forced: any
        // attempt seeded at the center must complete and match, while an
        // attempt seeded at a leaf jumps to the center and then sticks at
        // the leaf anchor.
        let host = Graph::from_edges(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        let h = Pattern::star(4).unwrap();
        for seed in 0..40 {
            let out = algorithm2(&host, &h, &DegreeWindow::all(), 64, &mut stream_rng(5, seed));
            assert!(out.found(), "seed {seed}");
            let emb = out.embedding.unwrap();
            assert_eq!(emb.image_of(0), 0, "pattern center must map to host center");
            assert!(emb.is_valid(&host, &h));
        }
    }

    #[test]
    fn algorithm2_empty_selection_fails_immediately() {
        let h = Pattern::clique(3).unwrap();
        let w = DegreeWindow::new(7.0, 9.0).unwrap();
        let out = algorithm2(&k3(), &h, &w, 100, &mut stream_rng(6, 0));
        assert!(!out.found());
        assert_eq!(out.checks, 0);
        assert_eq!(out.selected, 0);
    }

    #[test]
    fn algorithm2_stuck_attempts_consume_budget_without_checks() {
        // P3 pattern on a single-edge host: every attempt reaches size 2 and
        // then has no fresh neighbor, so no check ever runs.
        let host = Graph::from_edges(2, vec![(0, 1)]).unwrap();
        let h = Pattern::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let out = algorithm2(&host, &h, &DegreeWindow::all(), 50, &mut stream_rng(7, 0));
        assert!(!out.found());
        assert_eq!(out.checks, 0);
    }

    #[test]
    fn searches_are_deterministic() {
        let g = Graph::from_edges(
            8,
            vec![(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (3, 4), (4, 5), (5, 6), (6, 7)],
        )
        .unwrap();
        let h = Pattern::house();
        let w = DegreeWindow::all();
        for alg in [1, 2] {
            let run = |seed| {
                if alg == 1 {
                    algorithm1(&g, &h, &w, &mut stream_rng(seed, 0))
                } else {
                    algorithm2(&g, &h, &w, 64, &mut stream_rng(seed, 0))
                }
            };
            assert_eq!(run(9), run(9));
        }
    }

    #[test]
    fn induce_on_keeps_only_internal_edges() {
        let g = Graph::from_edges(6, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])
            .unwrap();
        let sub = induce_on(&g, &[0, 1, 2, 4]);
        assert_eq!(sub.vertex_count(), 4);
        // Local ids 0,1,2 map to originals 0,1,2; local 3 is original 4.
        assert_eq!(sub.edge_count(), 2);
        assert!(sub.has_edge(0, 1));
        assert!(sub.has_edge(1, 2));
        assert!(!sub.has_edge(2, 3));
    }

    #[test]
    fn grown_candidates_contain_the_expansion_tree() {
        // Drive the growth loop directly: on a host rich enough to complete
        // attempts, each completed candidate must contain the expansion
        // tree edges of the pattern inside the restricted graph.
        let mut edges = Vec::new();
        for i in 0..9u32 {
            for j in (i + 1)..9 {
                if (i + j) % 3 != 0 {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::from_edges(9, edges).unwrap();
        let h = Pattern::house();
        let order = h.expansion_order();
        let anchors = order.anchors();
        let restricted = induce_on(&g, &(0..9).collect::<Vec<_>>());
        let mut rng = stream_rng(10, 0);
        let mut completed = 0;
        for _ in 0..200 {
            let mut candidate = vec![rng.random_range(0..9u32)];
            while candidate.len() < h.k() {
                let anchor = candidate[anchors[candidate.len() - 1] - 1];
                match sample_new_neighbor(&restricted, anchor, &candidate, &mut rng) {
                    Some(v) => candidate.push(v),
                    None => break,
                }
            }
            if candidate.len() < h.k() {
                continue;
            }
            completed += 1;
            for (t, &a) in order.anchors().iter().enumerate() {
                assert!(
                    restricted.has_edge(candidate[a - 1], candidate[t + 1]),
                    "missing tree edge at growth step {t}"
                );
            }
        }
        assert!(completed > 50, "only {completed} attempts completed");
    }
}
