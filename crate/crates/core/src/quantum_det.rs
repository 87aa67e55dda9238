//! Zeta-regularized determinants of the Neumann–Kirchhoff Laplacian on a
//! metric graph, and the spanning-tree estimator built on them.
//!
//! Two routes compute `det′`:
//!
//! * equilateral closed form `2^{E-1} ℓ^{β+1} det′(Δ)`, from the harmonic
//!   Laplacian of the underlying discrete graph;
//! * Friedlander's formula `(2^E ℓ_tot / V) (Π ℓ_e / Π d_v) det′(R)` for
//!   arbitrary lengths, with `R` the inverse-length weighted Laplacian.
//!
//! Everything is accumulated as a logarithm; `2^E` and `Π ℓ_e` overflow
//! quickly otherwise.

use alloc::vec::Vec;
use core::f64::consts::LN_2;


use crate::graph::{Graph, MetricGraph};
use crate::matrices::{harmonic_laplacian, log_det_prime, spectrum, weighted_laplacian, SpectrumError};
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeterminantRoute {
    EquilateralClosedForm,
    Friedlander,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeterminantReport {
    pub route: DeterminantRoute,
    pub log_det_prime: f64,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub betti: usize,
    pub lengths: Vec<f64>,
}

impl DeterminantReport {
    pub fn det_prime(&self) -> f64 {
        self.log_det_prime.exp()
    }
}

/// `det′` of the equilateral graph with edge length `length`.
pub fn det_prime_equilateral(g: &Graph, length: f64) -> Result<DeterminantReport, SpectrumError> {
    let e = g.edge_count();
    let beta = g.betti();
    let log_delta = log_det_prime(&spectrum(&harmonic_laplacian(g))?)?;
    let log = (e as f64 - 1.0) * LN_2 + (beta as f64 + 1.0) * length.ln() + log_delta;
    Ok(DeterminantReport {
        route: DeterminantRoute::EquilateralClosedForm,
        log_det_prime: log,
        vertex_count: g.vertex_count(),
        edge_count: e,
        betti: beta,
        lengths: alloc::vec![length; e],
    })
}

/// `det′` by Friedlander's formula.
pub fn det_prime_friedlander(mg: &MetricGraph) -> Result<DeterminantReport, SpectrumError> {
    let g = mg.graph();
    let e = g.edge_count() as f64;
    let v = g.vertex_count() as f64;
    let log_r = log_det_prime(&spectrum(&weighted_laplacian(mg))?)?;
    let log = e * LN_2 + mg.total_length().ln() - v.ln() + mg.log_length_product()
        - g.log_degree_product()
        + log_r;
    Ok(DeterminantReport {
        route: DeterminantRoute::Friedlander,
        log_det_prime: log,
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        betti: g.betti(),
        lengths: mg.lengths().to_vec(),
    })
}

/// `ln` of the prefactor `Π d_v / (E 2^E ℓ^{β+1})`.
fn log_tree_prefactor(g: &Graph, length: f64) -> f64 {
    let e = g.edge_count() as f64;
    g.log_degree_product() - e.ln() - e * LN_2 - (g.betti() as f64 + 1.0) * length.ln()
}

/// `T = Π d_v / (E 2^E ℓ^{β+1}) · det′` for a supplied `det′` and reference length.
pub fn tree_value(g: &Graph, length: f64, det_prime: f64) -> f64 {
    (log_tree_prefactor(g, length) + det_prime.ln()).exp()
}

/// `ℓ / (V^V 2^{E+V} √(2EV))`.
pub fn threshold_delta(g: &Graph, length: f64) -> f64 {
    let v = g.vertex_count() as f64;
    let e = g.edge_count() as f64;
    let log_denominator = v * v.ln() + (e + v) * LN_2 + 0.5 * (2.0 * e * v).ln();
    length * (-log_denominator).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeEstimate {
    /// Raw estimator value.
    pub t_gamma: f64,
    /// `t_gamma` rounded half away from zero.
    pub nearest: u64,
    /// Reference length: the shortest edge.
    pub length: f64,
    /// Length spread `max - min`.
    pub spread: f64,
    pub delta_threshold: f64,
    /// Spread strictly below the threshold, so `nearest` is certified.
    pub spread_ok: bool,
    /// For stars only: spread at most half the reference length.
    pub relaxed_star_ok: Option<bool>,
    pub det_prime: f64,
}

/// Evaluates the estimator with `ℓ` the minimum length and `δ` the spread,
/// so every length lies in `[ℓ, ℓ + δ]`. Rounding always happens; whether it
/// is certified is reported separately.
pub fn tree_estimator(mg: &MetricGraph) -> Result<TreeEstimate, SpectrumError> {
    let g = mg.graph();
    let report = det_prime_friedlander(mg)?;
    let length = mg.min_length();
    let spread = mg.spread();
    let t_gamma = (log_tree_prefactor(g, length) + report.log_det_prime).exp();
    let delta_threshold = threshold_delta(g, length);
    Ok(TreeEstimate {
        t_gamma,
        nearest: libm::round(t_gamma) as u64,
        length,
        spread,
        delta_threshold,
        spread_ok: spread < delta_threshold,
        relaxed_star_ok: g.is_star().then_some(spread <= 0.5 * length),
        det_prime: report.det_prime(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use approx::assert_relative_eq;
    use core::f64::consts::E as EULER;

    #[test]
    fn equilateral_star_and_bipartite() {
        for leaves in 1..=6 {
            for &l in &[0.5, 1.0, 3.0] {
                let r = det_prime_equilateral(&fixtures::star(leaves), l).unwrap();
                let expected = 2f64.powi(leaves as i32) * l;
                assert_relative_eq!(r.det_prime(), expected, max_relative = 1e-12);
            }
        }
        for (m, p) in [(2, 4), (3, 3), (2, 3)] {
            let l = 2.0;
            let r = det_prime_equilateral(&fixtures::complete_bipartite(m, p), l).unwrap();
            let mp = (m * p) as i32;
            let expected = 2f64.powi(mp) * l.powi(mp - m as i32 - p as i32 + 2);
            assert_relative_eq!(r.det_prime(), expected, max_relative = 1e-12);
        }
        let p2 = det_prime_equilateral(&fixtures::path(2), 1.7).unwrap();
        assert_relative_eq!(p2.det_prime(), 3.4, max_relative = 1e-13);
    }

    #[test]
    fn friedlander_star_one_two() {
        let mg = MetricGraph::new(fixtures::star(2), alloc::vec![1.0, 2.0]).unwrap();
        let r = det_prime_friedlander(&mg).unwrap();
        assert_relative_eq!(r.det_prime(), 6.0, max_relative = 1e-13);
    }

    #[test]
    fn routes_agree_on_triangle() {
        let mg = MetricGraph::equilateral(fixtures::cycle(3), 1.0).unwrap();
        let f = det_prime_friedlander(&mg).unwrap().det_prime();
        let e = det_prime_equilateral(mg.graph(), 1.0).unwrap().det_prime();
        assert_relative_eq!(f, 9.0, max_relative = 1e-12);
        assert_relative_eq!(e, 9.0, max_relative = 1e-12);
    }

    #[test]
    fn threshold_examples() {
        let p2 = fixtures::path(2);
        assert_relative_eq!(threshold_delta(&p2, 1.0), 1.0 / 64.0, max_relative = 1e-14);
        assert_relative_eq!(threshold_delta(&p2, 2.0), 2.0 * threshold_delta(&p2, 1.0), max_relative = 1e-14);
        for leaves in 2..6 {
            let v = (leaves + 1) as f64;
            let expected = 1.0 / (v.powf(v) * 2f64.powf(2.0 * v - 1.0) * (2.0 * v * (v - 1.0)).sqrt());
            assert_relative_eq!(threshold_delta(&fixtures::star(leaves), 1.0), expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn equilateral_estimates_are_exact() {
        let k24 = MetricGraph::equilateral(fixtures::complete_bipartite(2, 4), 1.0).unwrap();
        let t = tree_estimator(&k24).unwrap();
        assert_relative_eq!(t.t_gamma, 32.0, max_relative = 1e-9);
        assert_eq!(t.nearest, 32);
        assert!(t.spread_ok);
        assert_eq!(t.relaxed_star_ok, None);

        let star = MetricGraph::equilateral(fixtures::star(5), EULER).unwrap();
        let t = tree_estimator(&star).unwrap();
        assert_relative_eq!(t.t_gamma, 1.0, max_relative = 1e-9);
        assert_eq!(t.relaxed_star_ok, Some(true));
    }

    #[test]
    fn star_with_spread_rounds_to_one() {
        let mg = MetricGraph::new(fixtures::star(3), alloc::vec![1.0, 1.4, 1.2]).unwrap();
        let t = tree_estimator(&mg).unwrap();
        assert_eq!(t.nearest, 1);
        assert_eq!(t.relaxed_star_ok, Some(true));
        assert!(!t.spread_ok);
        // star closed form (2^E / E) Σ ℓ_e, divided by the prefactor's 2^E E ℓ / Π d_v
        assert_relative_eq!(t.t_gamma, 3.6 / 3.0, max_relative = 1e-12);
    }
}
