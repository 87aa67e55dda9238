//! Spectral zeta function `Z(s) = Σ k_j^{-2s}` of an equilateral quantum
//! graph, written through Riemann and Hurwitz zeta functions, and the
//! determinant `exp(-Z′(0))` obtained from its analytic continuation.
//!
//! With `a_j = t_j ℓ / 2π` and `c = (ℓ/2π)^{2s}`,
//!
//! ```text
//! Z(s) = c (4^s (β - 1) + 2) ζ(2s) + c Σ_{j≥2} [ζ(2s, a_j) + ζ(2s, 1 - a_j)]
//! ```

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

use crate::graph::{Graph, MetricGraph};
use crate::matrices::{harmonic_laplacian, spectrum, SpectrumError};
use crate::special::{hurwitz_zeta, riemann_zeta, riemann_zeta_ds, HurwitzError};
use crate::spectrum_oracle::{secular_solve, OracleError};

/// Harmonic eigenvalues this far outside `[0, 2]` are rejected.
pub const EIGENVALUE_SLACK: f64 = 1e-10;

// arccos is badly conditioned at -1; eigenvalues this close to 2 map to π/ℓ.
const TOP_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZetaError {
    #[error("s = 1/2 lies on the excluded line")]
    HalfLinePole,
    #[error("s = {0} must be positive")]
    NonpositiveS(f64),
    #[error("direct sum needs s > 1, got {0}")]
    SNotConvergent(f64),
    #[error("harmonic eigenvalue {index} = {value} is outside [0, 2]")]
    EigenvalueOutOfRange { index: usize, value: f64 },
    #[error(transparent)]
    Hurwitz(#[from] HurwitzError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Oracle(Box<OracleError>),
}

impl From<OracleError> for ZetaError {
    fn from(e: OracleError) -> Self {
        ZetaError::Oracle(Box::new(e))
    }
}

/// `t_j = arccos(1 - λ_j) / ℓ` for the harmonic eigenvalues `λ_j`, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSet {
    pub phases: Vec<f64>,
    pub length: f64,
    pub eigenvalues: Vec<f64>,
}

impl PhaseSet {
    /// Hurwitz parameters `t_j ℓ / 2π` for `j ≥ 2`, each in `(0, 1/2]`.
    pub fn hurwitz_parameters(&self) -> impl Iterator<Item = f64> + '_ {
        self.phases[1..].iter().map(|t| t * self.length / (2.0 * PI))
    }
}

pub fn phase_set(g: &Graph, length: f64) -> Result<PhaseSet, ZetaError> {
    let s = spectrum(&harmonic_laplacian(g))?;
    let mut phases = Vec::with_capacity(s.len());
    for (index, &value) in s.eigenvalues.iter().enumerate() {
        if !(-EIGENVALUE_SLACK..=2.0 + EIGENVALUE_SLACK).contains(&value) {
            return Err(ZetaError::EigenvalueOutOfRange { index, value });
        }
        let t = if index == s.zero_index {
            0.0
        } else if value >= 2.0 - TOP_SNAP {
            PI
        } else {
            (1.0 - value.clamp(0.0, 2.0)).acos()
        };
        phases.push(t / length);
    }
    Ok(PhaseSet { phases, length, eigenvalues: s.eigenvalues })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaRoute {
    HurwitzFormula,
    DirectSum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaEvaluation {
    pub s: f64,
    pub value: f64,
    pub route: ZetaRoute,
    pub truncation_k: Option<f64>,
    pub tail_bound: Option<f64>,
}

pub fn zeta_hurwitz(g: &Graph, length: f64, s: f64) -> Result<ZetaEvaluation, ZetaError> {
    if s == 0.5 {
        return Err(ZetaError::HalfLinePole);
    }
    if !(s > 0.0) {
        return Err(ZetaError::NonpositiveS(s));
    }
    let phases = phase_set(g, length)?;
    let beta = g.betti() as f64;
    let scale = (length / (2.0 * PI)).powf(2.0 * s);
    let mut value = (4f64.powf(s) * (beta - 1.0) + 2.0) * riemann_zeta(2.0 * s)?;
    for a in phases.hurwitz_parameters() {
        value += hurwitz_zeta(2.0 * s, a)? + hurwitz_zeta(2.0 * s, 1.0 - a)?;
    }
    Ok(ZetaEvaluation {
        s,
        value: scale * value,
        route: ZetaRoute::HurwitzFormula,
        truncation_k: None,
        tail_bound: None,
    })
}

/// Upper bound on `Σ_{k_j > K} k_j^{-2s}`.
///
/// Comparing with the decoupled Dirichlet intervals gives
/// `K ℓ_tot/π - E ≤ N(K) ≤ K ℓ_tot/π + V`; integrating by parts against these
/// leaves `(ℓ_tot/π) K^{1-2s} / (2s-1) + (V + E) K^{-2s}`.
pub fn direct_sum_tail_bound(g: &Graph, total_length: f64, s: f64, cutoff: f64) -> f64 {
    let slack = (g.vertex_count() + g.edge_count()) as f64;
    total_length / PI * cutoff.powf(1.0 - 2.0 * s) / (2.0 * s - 1.0) + slack * cutoff.powf(-2.0 * s)
}

pub fn zeta_direct_sum(g: &Graph, length: f64, s: f64, cutoff: f64) -> Result<ZetaEvaluation, ZetaError> {
    if !(s > 1.0) {
        return Err(ZetaError::SNotConvergent(s));
    }
    let mg = MetricGraph::equilateral(g.clone(), length).map_err(OracleError::from)?;
    let spectrum = secular_solve(&mg, cutoff)?;
    let value = spectrum.ks.iter().skip(1).map(|k| k.powf(-2.0 * s)).sum();
    Ok(ZetaEvaluation {
        s,
        value,
        route: ZetaRoute::DirectSum,
        truncation_k: Some(cutoff),
        tail_bound: Some(direct_sum_tail_bound(g, mg.total_length(), s, cutoff)),
    })
}

/// `ln det′` of the equilateral quantum graph through `-Z′(0)`, together with
/// the eigenvalue-product spelling `2^{V+β-2} ℓ^{β+1} Π_{j≥2} λ_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaDeterminant {
    pub log_det: f64,
    pub log_eigen_product: f64,
}

impl ZetaDeterminant {
    pub fn det_prime(&self) -> f64 {
        self.log_det.exp()
    }
}

pub fn log_det_via_zeta(g: &Graph, length: f64) -> Result<ZetaDeterminant, ZetaError> {
    let phases = phase_set(g, length)?;
    let beta = g.betti() as f64;
    let c = (length / (2.0 * PI)).ln();
    let ln_2pi = (2.0 * PI).ln();

    // d/ds of the Riemann term at s = 0
    let z0 = riemann_zeta(0.0)?;
    let dz0 = riemann_zeta_ds(0.0)?;
    let riemann_part = (beta - 1.0) * 2.0 * LN_2 * z0 + (beta + 1.0) * 2.0 * (c * z0 + dz0);

    // d/ds of the Hurwitz pairs: 2c [ζ(0,a) + ζ(0,1-a)] + 2 [ζ′(0,a) + ζ′(0,1-a)]
    let mut hurwitz_part = 0.0;
    for a in phases.hurwitz_parameters() {
        let pair = hurwitz_zeta(0.0, a)? + hurwitz_zeta(0.0, 1.0 - a)?;
        // ζ′(0, a) = ln Γ(a) - ½ ln 2π
        let pair_ds = libm::lgamma(a) + libm::lgamma(1.0 - a) - ln_2pi;
        hurwitz_part += 2.0 * c * pair + 2.0 * pair_ds;
    }
    let v = g.vertex_count() as f64;
    let log_lambda: f64 = phases.eigenvalues[1..].iter().map(|l| l.ln()).sum();
    Ok(ZetaDeterminant {
        log_det: -(riemann_part + hurwitz_part),
        log_eigen_product: (v + beta - 2.0) * LN_2 + (beta + 1.0) * length.ln() + log_lambda,
    })
}
