//! Even-circuit machinery shared by the rectangle and design certificates.
//!
//! An even circuit is a closed trail (no repeated edge, vertices may repeat)
//! with an even number of edges. Vertices are `0..vertex_count`.

mod brute;
mod search;

use std::collections::BTreeSet;

pub use brute::{brute_force_even_circuit_exists, BRUTE_FORCE_MAX_VERTICES};
pub use search::{even_closed_trail_exists, is_forest};

use crate::error::AnalysisError;

/// Unordered edge stored as `(lo, hi)`.
pub type Edge = (usize, usize);

pub fn edge(a: usize, b: usize) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Simple undirected graph: no loops, no multi-edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    vertex_count: usize,
    edges: BTreeSet<Edge>,
}

impl SimpleGraph {
    pub fn new(vertex_count: usize) -> Self {
        Self { vertex_count, edges: BTreeSet::new() }
    }

    /// Panics on loops or out-of-range endpoints; duplicate edges are ignored.
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(vertex_count: usize, edges: I) -> Self {
        let mut g = Self::new(vertex_count);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> bool {
        assert!(a != b, "loop at {a}");
        assert!(a < self.vertex_count && b < self.vertex_count, "edge {{{a},{b}}} out of range");
        self.edges.insert(edge(a, b))
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&edge(a, b))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn degree(&self, w: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == w || b == w).count()
    }
}

/// `⌊(4v−3)/3⌋`: any simple graph on `v` vertices with more edges than this
/// has an even circuit.
pub fn even_circuit_threshold(v: usize) -> usize {
    assert!(v >= 1, "threshold needs at least one vertex");
    (4 * v - 3) / 3
}

/// A closed walk without repeated edges, stored as its vertex sequence:
/// edge `i` joins `walk[i]` and `walk[(i + 1) % len]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClosedTrail {
    walk: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrailError {
    TooShort(usize),
    MissingEdge(Edge),
    RepeatedEdge(Edge),
    Loop(usize),
}

impl ClosedTrail {
    pub fn from_walk(walk: Vec<usize>) -> Result<Self, TrailError> {
        let t = Self { walk };
        t.check_shape()?;
        Ok(t)
    }

    pub fn walk(&self) -> &[usize] {
        &self.walk
    }

    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }

    pub fn is_even(&self) -> bool {
        self.walk.len().is_multiple_of(2)
    }

    /// Edges in trail order.
    pub fn edges(&self) -> Vec<Edge> {
        let l = self.walk.len();
        (0..l).map(|i| edge(self.walk[i], self.walk[(i + 1) % l])).collect()
    }

    /// Vertices of the trail, ascending and deduplicated.
    pub fn vertices(&self) -> BTreeSet<usize> {
        self.walk.iter().copied().collect()
    }

    /// True if no vertex repeats.
    pub fn is_simple_cycle(&self) -> bool {
        self.vertices().len() == self.walk.len()
    }

    fn check_shape(&self) -> Result<(), TrailError> {
        if self.walk.len() < 3 {
            return Err(TrailError::TooShort(self.walk.len()));
        }
        let mut seen = BTreeSet::new();
        let l = self.walk.len();
        for i in 0..l {
            let (a, b) = (self.walk[i], self.walk[(i + 1) % l]);
            if a == b {
                return Err(TrailError::Loop(a));
            }
            if !seen.insert(edge(a, b)) {
                return Err(TrailError::RepeatedEdge(edge(a, b)));
            }
        }
        Ok(())
    }

    /// Distinct edges, closed walk, all edges present in `g`.
    pub fn validate_in(&self, g: &SimpleGraph) -> Result<(), TrailError> {
        self.check_shape()?;
        for e in self.edges() {
            if !g.has_edge(e.0, e.1) {
                return Err(TrailError::MissingEdge(e));
            }
        }
        Ok(())
    }
}

/// Splits an even trail into the edges at odd positions (`F1`: the 1st,
/// 3rd, ...) and even positions (`F2`), both in trail order.
///
/// Consecutive edges of the trail always land in different parts, so at
/// every vertex the two parts have equal degree. That balance is checked
/// here and is what keeps the swaps balanced.
pub fn alternate_partition(c: &ClosedTrail) -> Result<(Vec<Edge>, Vec<Edge>), AnalysisError> {
    if !c.is_even() {
        return Err(AnalysisError::OddTrail(c.len()));
    }
    let edges = c.edges();
    let f1: Vec<Edge> = edges.iter().step_by(2).copied().collect();
    let f2: Vec<Edge> = edges.iter().skip(1).step_by(2).copied().collect();
    assert!(degree_balanced(&f1, &f2), "alternating partition is not degree balanced");
    Ok((f1, f2))
}

/// Every vertex meets as many `f1` edges as `f2` edges.
pub fn degree_balanced(f1: &[Edge], f2: &[Edge]) -> bool {
    let mut bal: std::collections::BTreeMap<usize, i64> = Default::default();
    for &(a, b) in f1 {
        *bal.entry(a).or_default() += 1;
        *bal.entry(b).or_default() += 1;
    }
    for &(a, b) in f2 {
        *bal.entry(a).or_default() -= 1;
        *bal.entry(b).or_default() -= 1;
    }
    bal.values().all(|&x| x == 0)
}

/// Lexicographically least even closed trail by `(length, sorted edges)`,
/// or `None` iff the graph has no even closed trail.
///
/// The edge set is returned in a canonical Euler order: it starts at the
/// smaller endpoint of its smallest edge, traverses that edge first, and
/// then always takes the smallest admissible edge.
pub fn find_even_circuit(g: &SimpleGraph) -> Option<ClosedTrail> {
    if !even_closed_trail_exists(g) {
        return None;
    }
    let edges =
        search::least_eulerian_subgraph(g, 4, true).expect("an even closed trail exists, so the least one is found");
    Some(search::canonical_euler_order(&edges))
}

/// Least simple cycle by `(length, sorted edges)` in a bipartite graph
/// whose parts are given by `side` (`side[w]` is the part of vertex `w`).
/// `None` iff the graph is a forest.
pub fn find_cycle_bipartite(g: &SimpleGraph, side: &[bool]) -> Result<Option<ClosedTrail>, AnalysisError> {
    assert_eq!(side.len(), g.vertex_count(), "one side flag per vertex");
    for (a, b) in g.edges() {
        if side[a] == side[b] {
            return Err(AnalysisError::Bipartition(a, b));
        }
    }
    if is_forest(g) {
        return Ok(None);
    }
    // The shortest connected even-degree subgraph is always a simple cycle.
    let edges = search::least_eulerian_subgraph(g, 3, false).expect("a graph with a cycle has one");
    let trail = search::canonical_euler_order(&edges);
    debug_assert!(trail.is_simple_cycle() && trail.is_even());
    Ok(Some(trail))
}
