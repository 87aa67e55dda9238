//! Spanning-tree counts by four independent routes.

#[cfg(feature = "oracle")]
use alloc::vec::Vec;

use thiserror::Error;

use crate::graph::Graph;
use crate::matrices::{
    combinatorial_laplacian, harmonic_laplacian, log_det_prime, principal_minor, spectrum,
    SpectrumError,
};

/// Largest edge count the enumeration oracle accepts.
pub const BRUTE_FORCE_EDGE_LIMIT: usize = 24;

/// Half-width of the band around an integer accepted as "exactly integral".
pub const INTEGER_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeCountError {
    #[error("{edges} edges exceeds the enumeration limit of {BRUTE_FORCE_EDGE_LIMIT}")]
    TooLarge { edges: usize },
    #[error("determinant {value} is not within {INTEGER_GUARD:e} of an integer")]
    NonIntegerDeterminant { value: f64 },
    #[error("graph is not {expected}-regular")]
    NotRegular { expected: usize },
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    BruteForce,
    Minor,
    DetPrimeOverV,
    Harmonic,
    Regular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeCount {
    pub count: u64,
    pub method: CountMethod,
}

/// Rounds half away from zero, refusing values outside the integer guard band.
pub fn to_integer(value: f64) -> Result<u64, TreeCountError> {
    let rounded = libm::round(value);
    if !value.is_finite() || rounded < 0.0 || (value - rounded).abs() >= INTEGER_GUARD {
        return Err(TreeCountError::NonIntegerDeterminant { value });
    }
    Ok(rounded as u64)
}

// Union-find with union by size and an undo log; no path compression so that
// unions can be rolled back in LIFO order.
#[cfg(feature = "oracle")]
struct RollbackUnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    log: Vec<usize>,
}

#[cfg(feature = "oracle")]
impl RollbackUnionFind {
    fn new(n: usize) -> Self {
        RollbackUnionFind { parent: (0..n).collect(), size: alloc::vec![1; n], log: Vec::new() }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.log.push(rb);
        true
    }

    fn undo(&mut self) {
        if let Some(rb) = self.log.pop() {
            let ra = self.parent[rb];
            self.size[ra] -= self.size[rb];
            self.parent[rb] = rb;
        }
    }
}

/// Counts spanning trees by enumerating `(V-1)`-edge subsets in lexicographic
/// order and keeping the acyclic ones. A prefix that already closes a cycle is
/// abandoned together with every subset extending it.
#[cfg(feature = "oracle")]
pub fn count_brute_force(g: &Graph) -> Result<TreeCount, TreeCountError> {
    let edges = g.edges();
    if edges.len() > BRUTE_FORCE_EDGE_LIMIT {
        return Err(TreeCountError::TooLarge { edges: edges.len() });
    }
    let need = g.vertex_count() - 1;
    let mut uf = RollbackUnionFind::new(g.vertex_count());
    let count = extend_forest(edges, 0, need, &mut uf);
    Ok(TreeCount { count, method: CountMethod::BruteForce })
}

#[cfg(feature = "oracle")]
fn extend_forest(edges: &[(usize, usize)], next: usize, need: usize, uf: &mut RollbackUnionFind) -> u64 {
    if need == 0 {
        // V-1 acyclic edges on V vertices always span
        return 1;
    }
    let mut total = 0;
    // leave room for the remaining `need - 1` picks
    for i in next..=edges.len() - need {
        let (u, v) = edges[i];
        if uf.union(u, v) {
            total += extend_forest(edges, i + 1, need - 1, uf);
            uf.undo();
        }
    }
    total
}

/// Kirchhoff: `det(L[0])`, rounded.
pub fn count_matrix_tree(g: &Graph) -> Result<TreeCount, TreeCountError> {
    let l = combinatorial_laplacian(g);
    let count = to_integer(principal_minor(&l, 0))?;
    Ok(TreeCount { count, method: CountMethod::Minor })
}

/// `det′(L) / V`, rounded.
pub fn count_det_prime(g: &Graph) -> Result<TreeCount, TreeCountError> {
    let s = spectrum(&combinatorial_laplacian(g))?;
    let value = libm::exp(log_det_prime(&s)? - libm::log(g.vertex_count() as f64));
    Ok(TreeCount { count: to_integer(value)?, method: CountMethod::DetPrimeOverV })
}

/// The unrounded value `(Π d_v / 2E) det′(Δ)`.
pub fn harmonic_tree_value(g: &Graph) -> Result<f64, TreeCountError> {
    let s = spectrum(&harmonic_laplacian(g))?;
    let log = g.log_degree_product() - libm::log(2.0 * g.edge_count() as f64) + log_det_prime(&s)?;
    Ok(libm::exp(log))
}

/// `(Π d_v / 2E) det′(Δ)`, rounded.
pub fn count_harmonic(g: &Graph) -> Result<TreeCount, TreeCountError> {
    let count = to_integer(harmonic_tree_value(g)?)?;
    Ok(TreeCount { count, method: CountMethod::Harmonic })
}

/// `(d^{V-1} / V) det′(Δ)` for a `d`-regular graph.
pub fn count_regular(g: &Graph, d: usize) -> Result<TreeCount, TreeCountError> {
    if g.regular_degree() != Some(d) {
        return Err(TreeCountError::NotRegular { expected: d });
    }
    let v = g.vertex_count() as f64;
    let s = spectrum(&harmonic_laplacian(g))?;
    let log = (v - 1.0) * libm::log(d as f64) - libm::log(v) + log_det_prime(&s)?;
    Ok(TreeCount { count: to_integer(libm::exp(log))?, method: CountMethod::Regular })
}

/// Counts from every applicable method, brute force first.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeCountSummary {
    pub brute_force: Option<u64>,
    pub minor: u64,
    pub det_prime_over_v: u64,
    pub harmonic: u64,
    pub regular: Option<u64>,
}

impl TreeCountSummary {
    pub fn agree(&self) -> bool {
        let c = self.minor;
        self.det_prime_over_v == c
            && self.harmonic == c
            && self.brute_force.is_none_or(|b| b == c)
            && self.regular.is_none_or(|r| r == c)
    }
}

pub fn count_all(g: &Graph) -> Result<TreeCountSummary, TreeCountError> {
    #[cfg(feature = "oracle")]
    let brute_force = match count_brute_force(g) {
        Ok(t) => Some(t.count),
        Err(TreeCountError::TooLarge { .. }) => None,
        Err(e) => return Err(e),
    };
    #[cfg(not(feature = "oracle"))]
    let brute_force = None;
    let regular = match g.regular_degree() {
        Some(d) => Some(count_regular(g, d)?.count),
        None => None,
    };
    Ok(TreeCountSummary {
        brute_force,
        minor: count_matrix_tree(g)?.count,
        det_prime_over_v: count_det_prime(g)?.count,
        harmonic: count_harmonic(g)?.count,
        regular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn guard_band() {
        assert_eq!(to_integer(31.9999999).unwrap(), 32);
        assert_eq!(to_integer(2.5000000).ok(), None);
        assert_eq!(to_integer(2.5e-7).unwrap(), 0);
        assert!(to_integer(f64::NAN).is_err());
    }

    #[cfg(feature = "oracle")]
    #[test]
    fn brute_force_small() {
        assert_eq!(count_brute_force(&fixtures::path(2)).unwrap().count, 1);
        assert_eq!(count_brute_force(&fixtures::cycle(3)).unwrap().count, 3);
        assert_eq!(count_brute_force(&fixtures::complete_bipartite(2, 4)).unwrap().count, 32);
        assert_eq!(count_brute_force(&fixtures::complete(4)).unwrap().count, 16);
        assert!(matches!(
            count_brute_force(&fixtures::complete(8)),
            Err(TreeCountError::TooLarge { edges: 28 })
        ));
    }

    #[test]
    fn matrix_tree_small() {
        assert_eq!(count_matrix_tree(&fixtures::path(2)).unwrap().count, 1);
        assert_eq!(count_matrix_tree(&fixtures::cycle(3)).unwrap().count, 3);
        assert_eq!(count_matrix_tree(&fixtures::complete_bipartite(2, 4)).unwrap().count, 32);
    }

    #[test]
    fn harmonic_examples() {
        let k24 = fixtures::complete_bipartite(2, 4);
        assert_eq!(count_harmonic(&k24).unwrap().count, 32);
        assert_eq!(count_harmonic(&fixtures::star(3)).unwrap().count, 1);
        let c3 = harmonic_tree_value(&fixtures::cycle(3)).unwrap();
        assert!((c3 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn regular_examples() {
        assert_eq!(count_regular(&fixtures::cycle(3), 2).unwrap().count, 3);
        assert_eq!(count_regular(&fixtures::complete(4), 3).unwrap().count, 16);
        assert_eq!(count_regular(&fixtures::path(2), 1).unwrap().count, 1);
        assert_eq!(
            count_regular(&fixtures::star(3), 3),
            Err(TreeCountError::NotRegular { expected: 3 })
        );
    }

    #[test]
    fn summary_agrees() {
        let s = count_all(&fixtures::complete_bipartite(3, 3)).unwrap();
        assert!(s.agree());
        assert_eq!(s.minor, 81);
        assert_eq!(s.regular, Some(81));
    }
}
