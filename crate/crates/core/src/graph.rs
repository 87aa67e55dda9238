//! Simple connected graphs and their metric decorations.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("a graph needs at least two vertices, got {0}")]
    TooFewVertices(usize),
    #[error("edge ({u}, {v}) references a vertex outside 0..{vertex_count}")]
    VertexOutOfRange { u: usize, v: usize, vertex_count: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph is disconnected: vertex {0} is unreachable from vertex 0")]
    Disconnected(usize),
    #[error("edge {edge} has non-positive length {length}")]
    NonpositiveLength { edge: usize, length: f64 },
    #[error("expected {expected} edge lengths, got {got}")]
    MissingLength { expected: usize, got: usize },
}

/// A finite simple connected graph on vertices `0..V`.
///
/// Edges are stored as `(min, max)` pairs in insertion order; that order is
/// the edge index used by [`MetricGraph`] lengths and by the bond basis of the
/// secular solver.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    // incident edge indices per vertex, aligned with `adjacency`
    incidence: Vec<Vec<usize>>,
}

impl Graph {
    /// Validates and builds a graph. Rejects loops, parallel edges,
    /// out-of-range endpoints and disconnected input.
    pub fn new(vertex_count: usize, edge_list: &[(usize, usize)]) -> Result<Self, GraphError> {
        if vertex_count < 2 {
            return Err(GraphError::TooFewVertices(vertex_count));
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        let mut incidence = vec![Vec::new(); vertex_count];
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(u, v) in edge_list {
            if u >= vertex_count || v >= vertex_count {
                return Err(GraphError::VertexOutOfRange { u, v, vertex_count });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let e = (u.min(v), u.max(v));
            if adjacency[e.0].contains(&e.1) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
            let index = edges.len();
            edges.push(e);
            adjacency[e.0].push(e.1);
            adjacency[e.1].push(e.0);
            incidence[e.0].push(index);
            incidence[e.1].push(index);
        }
        let graph = Graph { vertex_count, edges, adjacency, incidence };
        let dist = graph.bfs(0);
        if let Some(v) = dist.iter().position(Option::is_none) {
            return Err(GraphError::Disconnected(v));
        }
        Ok(graph)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Edge indices incident to `v`, in the same order as [`Graph::neighbors`].
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(&v)
    }

    /// First Betti number `E - V + 1`.
    pub fn betti(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count
    }

    /// Natural log of the product of vertex degrees.
    pub fn log_degree_product(&self) -> f64 {
        self.adjacency.iter().map(|a| libm::log(a.len() as f64)).sum()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        self.adjacency.iter().all(|a| a.len() == d).then_some(d)
    }

    /// Largest `d_u + d_v` over edges.
    pub fn max_edge_degree_sum(&self) -> usize {
        self.edges
            .iter()
            .map(|&(u, v)| self.degree(u) + self.degree(v))
            .max()
            .unwrap_or(0)
    }

    /// A star is a tree with one vertex adjacent to all others. `P2` and `P3`
    /// count as stars.
    pub fn is_star(&self) -> bool {
        self.betti() == 0 && self.max_degree() == self.edge_count()
    }

    /// Edge-count distances from `source`; `None` marks unreachable vertices.
    pub fn bfs(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn diameter(&self) -> usize {
        (0..self.vertex_count)
            .flat_map(|s| self.bfs(s).into_iter().flatten())
            .max()
            .unwrap_or(0)
    }

    pub fn shape(&self) -> GraphShape {
        GraphShape {
            betti: self.betti(),
            diameter: self.diameter(),
            degree_sequence: self.degrees(),
            max_degree: self.max_degree(),
        }
    }

    /// Returns the same graph with vertices renamed by `perm` (`v -> perm[v]`)
    /// and the edge list kept in the same order.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Graph, GraphError> {
        let edges: Vec<_> = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Graph::new(self.vertex_count, &edges)
    }
}

/// Structural summary of a connected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphShape {
    pub betti: usize,
    pub diameter: usize,
    pub degree_sequence: Vec<usize>,
    pub max_degree: usize,
}

/// A graph whose edges carry positive lengths, indexed like [`Graph::edges`].
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    graph: Graph,
    lengths: Vec<f64>,
    total_length: f64,
}

impl MetricGraph {
    pub fn new(graph: Graph, lengths: Vec<f64>) -> Result<Self, GraphError> {
        if lengths.len() != graph.edge_count() {
            return Err(GraphError::MissingLength {
                expected: graph.edge_count(),
                got: lengths.len(),
            });
        }
        if let Some((edge, &length)) = lengths
            .iter()
            .enumerate()
            .find(|(_, &l)| !(l > 0.0 && l.is_finite()))
        {
            return Err(GraphError::NonpositiveLength { edge, length });
        }
        let total_length = lengths.iter().sum();
        Ok(MetricGraph { graph, lengths, total_length })
    }

    /// Every edge gets length `length`.
    pub fn equilateral(graph: Graph, length: f64) -> Result<Self, GraphError> {
        let lengths = vec![length; graph.edge_count()];
        MetricGraph::new(graph, lengths)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    /// Exact equality of all lengths.
    pub fn is_equilateral(&self) -> bool {
        self.lengths.iter().all(|&l| l == self.lengths[0])
    }

    pub fn min_length(&self) -> f64 {
        self.lengths.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_length(&self) -> f64 {
        self.lengths.iter().copied().fold(0.0, f64::max)
    }

    /// `max - min` of the edge lengths.
    pub fn spread(&self) -> f64 {
        self.max_length() - self.min_length()
    }

    pub fn log_length_product(&self) -> f64 {
        self.lengths.iter().map(|&l| libm::log(l)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn path_two() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let s = g.shape();
        assert_eq!(s.betti, 0);
        assert_eq!(s.diameter, 1);
        assert_eq!(s.degree_sequence, vec![1, 1]);
        assert!(g.is_star());
    }

    #[test]
    fn k24_shape() {
        let g = fixtures::complete_bipartite(2, 4);
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 8);
        let s = g.shape();
        assert_eq!(s.betti, 3);
        assert_eq!(s.diameter, 2);
        assert_eq!(s.degree_sequence, vec![4, 4, 2, 2, 2, 2]);
        assert_eq!(s.max_degree, 4);
    }

    #[test]
    fn triangle_shape() {
        let g = fixtures::cycle(3);
        let s = g.shape();
        assert_eq!((s.betti, s.diameter), (1, 1));
        assert_eq!(s.degree_sequence, vec![2, 2, 2]);
        assert_eq!(g.regular_degree(), Some(2));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            Graph::new(3, &[(0, 1), (1, 2), (0, 2), (0, 2)]),
            Err(GraphError::DuplicateEdge(0, 2))
        );
        assert_eq!(Graph::new(3, &[(0, 1), (2, 1), (1, 2)]), Err(GraphError::DuplicateEdge(1, 2)));
        assert_eq!(Graph::new(2, &[(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(Graph::new(4, &[(0, 1), (2, 3)]), Err(GraphError::Disconnected(2)));
        assert!(matches!(
            Graph::new(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { .. })
        ));
        assert_eq!(Graph::new(1, &[]), Err(GraphError::TooFewVertices(1)));
    }

    #[test]
    fn edges_are_canonical() {
        let g = Graph::new(3, &[(2, 0), (1, 2)]).unwrap();
        assert_eq!(g.edges(), &[(0, 2), (1, 2)]);
    }

    #[test]
    fn metric_decorations() {
        let p2 = MetricGraph::equilateral(fixtures::path(2), 1.0).unwrap();
        assert!(p2.is_equilateral());
        assert_eq!(p2.total_length(), 1.0);

        let star = MetricGraph::new(fixtures::star(2), vec![1.0, 2.0]).unwrap();
        assert!(!star.is_equilateral());
        assert_eq!(star.total_length(), 3.0);
        assert_eq!(star.spread(), 1.0);

        assert!(matches!(
            MetricGraph::new(fixtures::star(2), vec![1.0, 0.0]),
            Err(GraphError::NonpositiveLength { edge: 1, .. })
        ));
        assert!(matches!(
            MetricGraph::new(fixtures::star(2), vec![1.0]),
            Err(GraphError::MissingLength { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn star_detection() {
        assert!(fixtures::star(4).is_star());
        assert!(fixtures::path(3).is_star());
        assert!(!fixtures::path(4).is_star());
        assert!(!fixtures::cycle(4).is_star());
    }
}
