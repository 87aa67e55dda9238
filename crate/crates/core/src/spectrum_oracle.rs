//! Independent enumeration of quantum-graph eigenvalues.
//!
//! Two sources are provided:
//!
//! * [`enumerate_equilateral`] assembles the spectrum of an equilateral graph
//!   from the phases of the harmonic Laplacian plus the Dirichlet
//!   multiplicities read off the Riemann-zeta term of the spectral zeta
//!   function: `β - 1` at every `nπ/ℓ` and two more at every `2πn/ℓ`.
//! * [`secular_solve`] finds the zeros of `det(I - U(k))` for the bond
//!   scattering matrix `U(k) = e^{ikL} S` on any metric graph.
//!
//! The secular solver never looks at `det(I - U)` directly. Every eigenphase of
//! the unitary `U(k)` increases with `k`, and their sum is `2 k ℓ_tot` plus a
//! constant, so the number of phases that wrapped through `+1` on `(a, b]` is
//!
//! ```text
//! (2 ℓ_tot (b - a) + P(a) - P(b)) / 2π
//! ```
//!
//! where `P` sums the principal phases in `[0, 2π)`. That count is an exact
//! integer including multiplicity, so roots are located by bisecting on it.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

use crate::graph::{Graph, GraphError, MetricGraph};
use crate::zeta::{phase_set, ZetaError};

/// Roots are bisected until their bracket is narrower than this.
pub const ROOT_TOLERANCE: f64 = 1e-10;

/// Roots closer than this are reported as one root with summed multiplicity.
pub const MERGE_TOLERANCE: f64 = 1e-8;

const MAX_BISECTIONS: usize = 80;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("bisection did not isolate a root in [{lo}, {hi}]")]
    RootRefinementFailure { lo: f64, hi: f64 },
    #[error("found {found} roots below {cutoff} but the phase count says {expected}")]
    GridTooCoarse { found: usize, expected: usize, cutoff: f64 },
    #[error("eigenvalue count {count} below {cutoff} is outside the Weyl window around {weyl}")]
    WeylMismatch { count: usize, cutoff: f64, weyl: f64 },
    #[error("unitary eigenvalue iteration did not converge")]
    EigenphaseConvergence,
    #[error("assembled multiplicity {multiplicity} at k = {k} is negative")]
    NegativeMultiplicity { k: f64, multiplicity: i64 },
    #[error("cutoff must be positive, got {0}")]
    NonpositiveCutoff(f64),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumSource {
    VonBelowEnumeration,
    SecularSolver,
}

/// Wavenumbers `k ≥ 0` with `k²` an eigenvalue, ascending, repeated by
/// multiplicity, up to `cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumSpectrum {
    pub ks: Vec<f64>,
    pub cutoff: f64,
    pub source: SpectrumSource,
}

impl QuantumSpectrum {
    /// `N(K) = #{k_j ≤ K}`, counting the zero mode.
    pub fn count_up_to(&self, k: f64) -> usize {
        self.ks.iter().filter(|&&x| x <= k).count()
    }
}

fn merge_roots(mut entries: Vec<(f64, i64)>) -> Vec<(f64, i64)> {
    entries.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, i64)> = Vec::new();
    for (k, m) in entries {
        match merged.last_mut() {
            Some(last) if k - last.0 <= MERGE_TOLERANCE * (1.0 + k) => last.1 += m,
            _ => merged.push((k, m)),
        }
    }
    merged
}

fn expand(zero_mode: bool, roots: &[(f64, i64)]) -> Result<Vec<f64>, OracleError> {
    let mut ks = Vec::new();
    if zero_mode {
        ks.push(0.0);
    }
    for &(k, m) in roots {
        if m < 0 {
            return Err(OracleError::NegativeMultiplicity { k, multiplicity: m });
        }
        ks.extend(core::iter::repeat_n(k, m as usize));
    }
    Ok(ks)
}

/// Spectrum of the equilateral graph with edge length `length`, assembled
/// from the harmonic-Laplacian phases and the decoded Dirichlet multiplicities.
pub fn enumerate_equilateral(g: &Graph, length: f64, cutoff: f64) -> Result<QuantumSpectrum, OracleError> {
    if !(cutoff > 0.0) {
        return Err(OracleError::NonpositiveCutoff(cutoff));
    }
    let phases = phase_set(g, length)?;
    let period = 2.0 * PI / length;
    let mut entries: Vec<(f64, i64)> = Vec::new();
    for &t in &phases.phases[1..] {
        let mut k = t;
        while k <= cutoff {
            entries.push((k, 1));
            k += period;
        }
        let mut k = period - t;
        while k <= cutoff {
            entries.push((k, 1));
            k += period;
        }
    }
    let dirichlet = g.betti() as i64 - 1;
    let half = PI / length;
    let mut n = 1;
    while n as f64 * half <= cutoff {
        let k = n as f64 * half;
        entries.push((k, dirichlet + if n % 2 == 0 { 2 } else { 0 }));
        n += 1;
    }
    let merged: Vec<_> = merge_roots(entries).into_iter().filter(|&(_, m)| m != 0).collect();
    Ok(QuantumSpectrum {
        ks: expand(true, &merged)?,
        cutoff,
        source: SpectrumSource::VonBelowEnumeration,
    })
}

/// Bond scattering data for the Neumann–Kirchhoff vertex conditions.
///
/// Bond `2e` runs along edge `e = (u, v)` from `u` to `v`; bond `2e + 1` runs
/// back. A wave arriving at vertex `w` on bond `b` leaves on bond `b'` (which
/// starts at `w`) with amplitude `2/d_w - [b' reverses b]`.
#[derive(Debug, Clone)]
pub struct BondScattering {
    bond_lengths: Vec<f64>,
    scattering: Vec<f64>,
    total_length: f64,
}

impl BondScattering {
    pub fn new(mg: &MetricGraph) -> Self {
        let g = mg.graph();
        let bonds = 2 * g.edge_count();
        let mut bond_lengths = vec![0.0; bonds];
        let mut start = vec![0; bonds];
        let mut end = vec![0; bonds];
        for (e, (&(u, v), &len)) in g.edges().iter().zip(mg.lengths()).enumerate() {
            bond_lengths[2 * e] = len;
            bond_lengths[2 * e + 1] = len;
            (start[2 * e], end[2 * e]) = (u, v);
            (start[2 * e + 1], end[2 * e + 1]) = (v, u);
        }
        let mut scattering = vec![0.0; bonds * bonds];
        for b in 0..bonds {
            let w = end[b];
            let sigma = 2.0 / g.degree(w) as f64;
            for out in 0..bonds {
                if start[out] == w {
                    let reflect = if out == (b ^ 1) { 1.0 } else { 0.0 };
                    scattering[out * bonds + b] = sigma - reflect;
                }
            }
        }
        BondScattering { bond_lengths, scattering, total_length: mg.total_length() }
    }

    pub fn bond_count(&self) -> usize {
        self.bond_lengths.len()
    }

    /// Row-major `U(k) = e^{ikL} S`.
    pub fn unitary(&self, k: f64) -> Vec<Complex64> {
        let n = self.bond_count();
        let mut u = vec![Complex64::new(0.0, 0.0); n * n];
        for (row, &len) in self.bond_lengths.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, k * len);
            for col in 0..n {
                u[row * n + col] = phase * self.scattering[row * n + col];
            }
        }
        u
    }

    /// `det(I - U(k))`, the secular function.
    pub fn secular_determinant(&self, k: f64) -> Complex64 {
        let n = self.bond_count();
        let mut a = self.unitary(k);
        for x in a.iter_mut() {
            *x = -*x;
        }
        for i in 0..n {
            a[i * n + i] += 1.0;
        }
        complex_determinant(a, n)
    }

    /// Sum of the eigenphases of `U(k)`, each taken in `[0, 2π)`.
    pub fn principal_phase_sum(&self, k: f64) -> Result<f64, OracleError> {
        let n = self.bond_count();
        let eig = unitary_eigenvalues(self.unitary(k), n)?;
        Ok(eig
            .iter()
            .map(|z| {
                let t = z.arg();
                if t < 0.0 { t + 2.0 * PI } else { t }
            })
            .sum())
    }

    /// Number of eigenphases that wrap through `+1` on `(a, b]`, counted with
    /// multiplicity.
    pub fn crossings(&self, a: f64, pa: f64, b: f64, pb: f64) -> i64 {
        let turns = (2.0 * self.total_length * (b - a) + pa - pb) / (2.0 * PI);
        libm::round(turns) as i64
    }
}

fn complex_determinant(mut a: Vec<Complex64>, n: usize) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm()))
            .unwrap_or(col);
        if a[pivot * n + col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for i in col + 1..n {
            let f = a[i * n + col] / p;
            for j in col + 1..n {
                let t = a[col * n + j];
                a[i * n + j] -= f * t;
            }
        }
    }
    det
}

/// Eigenvalues of a (normal) complex matrix by Householder reduction to
/// Hessenberg form and Wilkinson-shifted QR with Givens rotations.
pub fn unitary_eigenvalues(mut h: Vec<Complex64>, n: usize) -> Result<Vec<Complex64>, OracleError> {
    let zero = Complex64::new(0.0, 0.0);
    let at = |i: usize, j: usize| i * n + j;

    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| h[at(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[at(k + 1, k)];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[at(i, k)]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vv == 0.0 {
            continue;
        }
        // H A
        for j in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(r, vr)| vr.conj() * h[at(k + 1 + r, j)]).sum();
            let f = dot * (2.0 / vv);
            for (r, vr) in v.iter().enumerate() {
                h[at(k + 1 + r, j)] -= vr * f;
            }
        }
        // (H A) H
        for i in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(c, vc)| h[at(i, k + 1 + c)] * vc).sum();
            let f = dot * (2.0 / vv);
            for (c, vc) in v.iter().enumerate() {
                h[at(i, k + 1 + c)] -= f * vc.conj();
            }
        }
        for i in k + 2..n {
            h[at(i, k)] = zero;
        }
    }

    let mut eig = Vec::with_capacity(n);
    if n == 0 {
        return Ok(eig);
    }
    let mut hi = n - 1;
    let mut iter = 0;
    let mut total = 0;
    let mut rot: Vec<(f64, Complex64)> = vec![(1.0, zero); n];
    loop {
        if hi == 0 {
            eig.push(h[at(0, 0)]);
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            let scale = h[at(lo - 1, lo - 1)].norm() + h[at(lo, lo)].norm();
            let scale = if scale == 0.0 { 1.0 } else { scale };
            if h[at(lo, lo - 1)].norm() <= f64::EPSILON * scale {
                h[at(lo, lo - 1)] = zero;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig.push(h[at(hi, hi)]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > 60 * n {
            return Err(OracleError::EigenphaseConvergence);
        }

        let a = h[at(hi - 1, hi - 1)];
        let b = h[at(hi - 1, hi)];
        let c = h[at(hi, hi - 1)];
        let d = h[at(hi, hi)];
        let mu = if iter % 11 == 0 {
            // exceptional shift to break cycles
            d + c.norm() * Complex64::new(0.75, 0.5)
        } else {
            let half = (a + d) * 0.5;
            let disc = ((a - d) * (a - d) * 0.25 + b * c).sqrt();
            let (m1, m2) = (half + disc, half - disc);
            if (m1 - d).norm() <= (m2 - d).norm() { m1 } else { m2 }
        };

        for i in lo..=hi {
            h[at(i, i)] -= mu;
        }
        for i in lo..hi {
            let x = h[at(i, i)];
            let y = h[at(i + 1, i)];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (cs, sn) = if r == 0.0 {
                (1.0, zero)
            } else if x.norm() == 0.0 {
                (0.0, y.conj() / y.norm())
            } else {
                (x.norm() / r, (x / x.norm()) * y.conj() / r)
            };
            rot[i] = (cs, sn);
            for j in i..=hi {
                let p = h[at(i, j)];
                let q = h[at(i + 1, j)];
                h[at(i, j)] = p * cs + sn * q;
                h[at(i + 1, j)] = -sn.conj() * p + q * cs;
            }
        }
        for i in lo..hi {
            let (cs, sn) = rot[i];
            for r in lo..=(i + 1).min(hi) {
                let p = h[at(r, i)];
                let q = h[at(r, i + 1)];
                h[at(r, i)] = p * cs + q * sn.conj();
                h[at(r, i + 1)] = -p * sn + q * cs;
            }
        }
        for i in lo..=hi {
            h[at(i, i)] += mu;
        }
    }
    Ok(eig)
}

struct PhaseCounter<'a> {
    bonds: &'a BondScattering,
}

impl PhaseCounter<'_> {
    fn phase(&self, k: f64) -> Result<f64, OracleError> {
        self.bonds.principal_phase_sum(k)
    }

    // Splits (a, b] until each jump in the crossing count is isolated.
    fn isolate(&self, a: f64, pa: f64, b: f64, pb: f64, depth: usize, out: &mut Vec<(f64, i64)>) -> Result<(), OracleError> {
        let jump = self.bonds.crossings(a, pa, b, pb);
        if jump == 0 {
            return Ok(());
        }
        if b - a <= ROOT_TOLERANCE * (1.0 + b) {
            out.push((0.5 * (a + b), jump));
            return Ok(());
        }
        if depth >= MAX_BISECTIONS {
            return Err(OracleError::RootRefinementFailure { lo: a, hi: b });
        }
        let m = 0.5 * (a + b);
        let pm = self.phase(m)?;
        self.isolate(a, pa, m, pm, depth + 1, out)?;
        self.isolate(m, pm, b, pb, depth + 1, out)
    }
}

/// Roots of the secular equation in `(0, cutoff]` by phase counting on a grid
/// of step at most `π / (8 ℓ_tot)` and bisection of every cell whose count
/// jumps. The zero mode is prepended.
pub fn secular_solve(mg: &MetricGraph, cutoff: f64) -> Result<QuantumSpectrum, OracleError> {
    if !(cutoff > 0.0) {
        return Err(OracleError::NonpositiveCutoff(cutoff));
    }
    let bonds = BondScattering::new(mg);
    let counter = PhaseCounter { bonds: &bonds };
    let total = mg.total_length();
    let max_step = PI / (8.0 * total);
    // the first nonzero eigenvalue is at least π / ℓ_tot, so (0, max_step] is empty
    let start = max_step.min(cutoff);
    let cells = libm::ceil((cutoff - start) / max_step).max(1.0) as usize;
    let step = (cutoff - start) / cells as f64;

    let mut roots = Vec::new();
    let p_start = counter.phase(start)?;
    let mut a = start;
    let mut pa = p_start;
    for i in 1..=cells {
        let b = if i == cells { cutoff } else { start + step * i as f64 };
        let pb = counter.phase(b)?;
        counter.isolate(a, pa, b, pb, 0, &mut roots)?;
        a = b;
        pa = pb;
    }
    let merged = merge_roots(roots);
    let ks = expand(true, &merged)?;

    let expected = bonds.crossings(start, p_start, cutoff, pa);
    let found = ks.len() - 1;
    if expected < 0 || found != expected as usize {
        return Err(OracleError::GridTooCoarse { found, expected: expected.max(0) as usize, cutoff });
    }
    let g = mg.graph();
    let weyl = cutoff * total / PI;
    let count = ks.len() as f64;
    if count > weyl + g.vertex_count() as f64 || count <= weyl - g.edge_count() as f64 {
        return Err(OracleError::WeylMismatch { count: ks.len(), cutoff, weyl });
    }
    Ok(QuantumSpectrum { ks, cutoff, source: SpectrumSource::SecularSolver })
}
