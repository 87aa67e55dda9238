//! Checkable forms of the perturbation and spectral bounds behind the
//! spanning-tree threshold.
//!
//! Every check returns a [`BoundReport`] reading "`lhs` is below `rhs`". Strict
//! reports compare exactly; non-strict ones allow `1e-12 · max(1, |rhs|)` of
//! roundoff, since they are routinely attained with equality.

use alloc::vec::Vec;
use core::f64::consts::LN_2;

#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

use crate::graph::{Graph, MetricGraph};
use crate::linalg::{symmetric_spectral_norm, Matrix};
use crate::matrices::{
    combinatorial_laplacian, det_prime, equilateral_weighted_laplacian, spectrum, weighted_laplacian,
    SpectrumError,
};
use crate::quantum_det::{det_prime_equilateral, det_prime_friedlander, tree_value};

pub const ROUNDOFF_ALLOWANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("edge {edge} has length {length} outside [{lo}, {hi}]")]
    LengthsOutOfWindow { edge: usize, length: f64, lo: f64, hi: f64 },
    #[error("window needs ℓ > 0 and δ ≥ 0, got ℓ = {length}, δ = {delta}")]
    InvalidWindow { length: f64, delta: f64 },
    #[error("perturbation {a} is not below λ₂ = {lambda2}")]
    DeltaTooLarge { a: f64, lambda2: f64 },
    #[error("max edge degree sum {max_sum} is not below V = {vertex_count}")]
    NotApplicable { max_sum: usize, vertex_count: usize },
    #[error("product-difference lemma needs 0 < a < min α")]
    ProductDomain,
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

impl From<crate::linalg::LinalgError> for BoundError {
    fn from(e: crate::linalg::LinalgError) -> Self {
        BoundError::Spectrum(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Strict,
    NonStrict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub sense: Sense,
    pub holds: bool,
    pub slack: f64,
}

impl BoundReport {
    pub fn new(name: &'static str, lhs: f64, rhs: f64, sense: Sense) -> Self {
        let holds = match sense {
            Sense::Strict => lhs < rhs,
            Sense::NonStrict => lhs <= rhs + ROUNDOFF_ALLOWANCE * rhs.abs().max(1.0),
        };
        BoundReport { name, lhs, rhs, sense, holds, slack: rhs - lhs }
    }
}

// With δ = 0 both sides of a strict perturbation bound vanish.
fn perturbation_sense(delta: f64) -> Sense {
    if delta > 0.0 { Sense::Strict } else { Sense::NonStrict }
}

/// Checks that every length lies in the closed window `[ℓ, ℓ + δ]`.
pub fn check_window(mg: &MetricGraph, length: f64, delta: f64) -> Result<(), BoundError> {
    if !(length > 0.0 && delta >= 0.0 && delta.is_finite()) {
        return Err(BoundError::InvalidWindow { length, delta });
    }
    let hi = length + delta;
    for (edge, &l) in mg.lengths().iter().enumerate() {
        if l < length || l > hi {
            return Err(BoundError::LengthsOutOfWindow { edge, length: l, lo: length, hi });
        }
    }
    Ok(())
}

fn norm_rhs(g: &Graph, length: f64, delta: f64) -> f64 {
    let e = g.edge_count() as f64;
    let v = g.vertex_count() as f64;
    delta * (2.0 * e * v).sqrt() / (length * length)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormBound {
    /// `‖R̃ - R‖₂ < δ √(2EV) / ℓ²`.
    pub report: BoundReport,
    /// `‖R̃ - R‖₂ < δ √(2E(d_max + 1)) / ℓ²`, the sharper intermediate step.
    pub intermediate: BoundReport,
}

/// `R̃ - R` assembled entrywise from `1/ℓ - 1/ℓ_e = (ℓ_e - ℓ) / (ℓ ℓ_e)`,
/// which avoids cancelling two nearly equal matrices.
pub fn weighted_difference(mg: &MetricGraph, length: f64) -> Matrix {
    let g = mg.graph();
    let mut diff = Matrix::zeros(g.vertex_count());
    for (&(u, v), &l) in g.edges().iter().zip(mg.lengths()) {
        let w = (l - length) / (length * l);
        diff[(u, u)] += w;
        diff[(v, v)] += w;
        diff[(u, v)] -= w;
        diff[(v, u)] -= w;
    }
    diff
}

/// `R̃ = L/ℓ` against the weighted Laplacian `R` of `mg`.
pub fn norm_bound(mg: &MetricGraph, length: f64, delta: f64) -> Result<NormBound, BoundError> {
    check_window(mg, length, delta)?;
    let g = mg.graph();
    let norm = symmetric_spectral_norm(&weighted_difference(mg, length))?;
    let sense = perturbation_sense(delta);
    let e = g.edge_count() as f64;
    let intermediate = delta * (2.0 * e * (g.max_degree() as f64 + 1.0)).sqrt() / (length * length);
    Ok(NormBound {
        report: BoundReport::new("norm_bound", norm, norm_rhs(g, length, delta), sense),
        intermediate: BoundReport::new("norm_bound_intermediate", norm, intermediate, sense),
    })
}

/// `|λ̃_j - λ_j| ≤ ‖R̃ - R‖₂` for every index of the sorted spectra.
pub fn eigenvalue_drift(mg: &MetricGraph, length: f64, delta: f64) -> Result<Vec<BoundReport>, BoundError> {
    check_window(mg, length, delta)?;
    let g = mg.graph();
    let tilde = equilateral_weighted_laplacian(g, length);
    let actual = weighted_laplacian(mg);
    let norm = symmetric_spectral_norm(&weighted_difference(mg, length))?;
    let a = spectrum(&tilde)?;
    let b = spectrum(&actual)?;
    Ok(a.eigenvalues
        .iter()
        .zip(&b.eigenvalues)
        .map(|(x, y)| BoundReport::new("eigenvalue_drift", (x - y).abs(), norm, Sense::NonStrict))
        .collect())
}

/// `|det′R - det′R̃| < δ 2^{V-1} √(2EV) / (ℓ² λ₂) · det′R`, guarded by
/// `a = δ √(2EV) / ℓ² < λ₂(R)`.
pub fn det_drift(mg: &MetricGraph, length: f64, delta: f64) -> Result<BoundReport, BoundError> {
    check_window(mg, length, delta)?;
    let g = mg.graph();
    let a = norm_rhs(g, length, delta);
    let r = spectrum(&weighted_laplacian(mg))?;
    let lambda2 = r.second();
    if a >= lambda2 {
        return Err(BoundError::DeltaTooLarge { a, lambda2 });
    }
    let det_r = det_prime(&r)?;
    let det_tilde = det_prime(&spectrum(&equilateral_weighted_laplacian(g, length))?)?;
    let v = g.vertex_count() as i32;
    let rhs = a * 2f64.powi(v - 1) / lambda2 * det_r;
    Ok(BoundReport::new("det_drift", (det_r - det_tilde).abs(), rhs, perturbation_sense(delta)))
}

/// `Π(α_j + a) - Π α_j < a 2^n Π_{j≥2} α_j` for `0 < a < α_1 ≤ … ≤ α_n`.
pub fn product_difference(alphas: &[f64], a: f64) -> Result<BoundReport, BoundError> {
    let mut sorted = alphas.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.is_empty() || !(a > 0.0 && a < sorted[0]) {
        return Err(BoundError::ProductDomain);
    }
    let shifted: f64 = sorted.iter().map(|x| x + a).product();
    let plain: f64 = sorted.iter().product();
    let tail: f64 = sorted[1..].iter().product();
    let rhs = a * 2f64.powi(sorted.len() as i32) * tail;
    Ok(BoundReport::new("product_difference", shifted - plain, rhs, Sense::Strict))
}

/// `4 / (DV) ≤ μ₂`.
pub fn mckay_lower(g: &Graph) -> Result<BoundReport, BoundError> {
    let mu = spectrum(&combinatorial_laplacian(g))?;
    let lower = 4.0 / (g.diameter() as f64 * g.vertex_count() as f64);
    Ok(BoundReport::new("mckay_lower", lower, mu.second(), Sense::NonStrict))
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpperBounds {
    /// `μ_V ≤ V`.
    pub vertex_count: BoundReport,
    /// `μ_V ≤ max (d_u + d_v)` over edges.
    pub degree_sum: BoundReport,
    /// `max (d_u + d_v) < V`, so the relaxed threshold applies.
    pub relaxation_available: bool,
}

impl UpperBounds {
    pub fn reports(&self) -> [&BoundReport; 2] {
        [&self.vertex_count, &self.degree_sum]
    }
}

pub fn upper_bounds(g: &Graph) -> Result<UpperBounds, BoundError> {
    let top = spectrum(&combinatorial_laplacian(g))?.largest();
    let v = g.vertex_count();
    let m = g.max_edge_degree_sum();
    Ok(UpperBounds {
        vertex_count: BoundReport::new("upper_vertex_count", top, v as f64, Sense::NonStrict),
        degree_sum: BoundReport::new("upper_degree_sum", top, m as f64, Sense::NonStrict),
        relaxation_available: m < v,
    })
}

/// Spread threshold with `det′L ≤ M^{V-1}`, `M = max (d_u + d_v)`, in place
/// of `det′L ≤ V^{V-1}`.
///
/// The tree-value difference is below
/// `δ det′L 2^{E+1} / (ℓV) · [2^{V-1} √(2EV) / (ℓ λ̃₂) + 1]`, and
/// `ℓ λ̃₂ > 4/V²` is unchanged. Substituting `M^{V-1}` gives
/// `(δ/ℓ) M^{V-1} 2^{E+1} / V · [V² 2^{V-3} √(2EV) + 1] < (δ/ℓ) M^{V-1} V 2^{E+V-1} √(2EV)`,
/// and requiring this to be at most `1/2` yields
/// `δ < ℓ / (M^{V-1} V 2^{E+V} √(2EV))`. With `M = V` this is the usual threshold.
pub fn relaxed_threshold(g: &Graph, length: f64) -> Result<f64, BoundError> {
    let v = g.vertex_count();
    let m = g.max_edge_degree_sum();
    if m >= v {
        return Err(BoundError::NotApplicable { max_sum: m, vertex_count: v });
    }
    let (vf, ef, mf) = (v as f64, g.edge_count() as f64, m as f64);
    let log_denominator =
        (vf - 1.0) * mf.ln() + vf.ln() + (ef + vf) * LN_2 + 0.5 * (2.0 * ef * vf).ln();
    Ok(length * (-log_denominator).exp())
}

/// `|T_Γ - T_Γ̃| < (δ/ℓ) V^V 2^{E+V-1} √(2EV)`, both values taken with
/// reference length `ℓ`.
pub fn tree_drift(mg: &MetricGraph, length: f64, delta: f64) -> Result<BoundReport, BoundError> {
    check_window(mg, length, delta)?;
    let g = mg.graph();
    let t = tree_value(g, length, det_prime_friedlander(mg)?.det_prime());
    let t_tilde = tree_value(g, length, det_prime_equilateral(g, length)?.det_prime());
    let (v, e) = (g.vertex_count() as f64, g.edge_count() as f64);
    let log_rhs = (delta / length).ln() + v * v.ln() + (e + v - 1.0) * LN_2 + 0.5 * (2.0 * e * v).ln();
    Ok(BoundReport::new("tree_drift", (t - t_tilde).abs(), log_rhs.exp(), perturbation_sense(delta)))
}
