//! Discrete graph operators: combinatorial Laplacian `L = D - A`, harmonic
//! Laplacian `D^{-1} L`, the length-weighted Laplacian of a metric graph, and
//! pruned determinants of their spectra.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

use crate::graph::{Graph, MetricGraph};
use crate::linalg::{LinalgError, Matrix, SymmetricEigen};

/// Retained eigenvalues at or below this are treated as a broken kernel.
pub const MIN_RETAINED_EIGENVALUE: f64 = 1e-12;

/// Relative residual accepted for every computed eigenpair.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("retained eigenvalue {index} is {value:e}; the kernel is not simple")]
    NonpositiveEigenvalue { index: usize, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaplacianKind {
    /// `L = D - A`.
    Combinatorial,
    /// `D^{-1} L`; not symmetric, similar to `D^{-1/2} L D^{-1/2}`.
    Harmonic,
    /// Weighted by inverse edge lengths.
    Weighted,
    /// `L / ℓ` for an equilateral graph of edge length `ℓ`.
    EquilateralWeighted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    pub kind: LaplacianKind,
    pub entries: Matrix,
    // vertex degrees, needed to symmetrize the harmonic kind
    degrees: Vec<usize>,
}

impl LaplacianMatrix {
    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    /// The symmetric matrix whose spectrum equals this operator's.
    pub fn symmetric_form(&self) -> Matrix {
        match self.kind {
            LaplacianKind::Harmonic => {
                let n = self.dim();
                let mut s = Matrix::zeros(n);
                for i in 0..n {
                    for j in 0..n {
                        // D^{1/2} (D^{-1} L) D^{-1/2}
                        let scale = (self.degrees[i] as f64).sqrt() / (self.degrees[j] as f64).sqrt();
                        s[(i, j)] = self.entries[(i, j)] * scale;
                    }
                }
                // round-off in the scaling can break exact symmetry
                for i in 0..n {
                    for j in 0..i {
                        let avg = 0.5 * (s[(i, j)] + s[(j, i)]);
                        s[(i, j)] = avg;
                        s[(j, i)] = avg;
                    }
                }
                s
            }
            _ => self.entries.clone(),
        }
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entries.row(i).iter().sum()).collect()
    }
}

pub fn combinatorial_laplacian(g: &Graph) -> LaplacianMatrix {
    let n = g.vertex_count();
    let mut m = Matrix::zeros(n);
    for v in 0..n {
        m[(v, v)] = g.degree(v) as f64;
    }
    for &(u, v) in g.edges() {
        m[(u, v)] = -1.0;
        m[(v, u)] = -1.0;
    }
    LaplacianMatrix { kind: LaplacianKind::Combinatorial, entries: m, degrees: g.degrees() }
}

pub fn harmonic_laplacian(g: &Graph) -> LaplacianMatrix {
    let n = g.vertex_count();
    let mut m = Matrix::zeros(n);
    for v in 0..n {
        m[(v, v)] = 1.0;
    }
    for &(u, v) in g.edges() {
        m[(u, v)] = -1.0 / g.degree(u) as f64;
        m[(v, u)] = -1.0 / g.degree(v) as f64;
    }
    LaplacianMatrix { kind: LaplacianKind::Harmonic, entries: m, degrees: g.degrees() }
}

/// `R_uv = -1/ℓ_(u,v)` on edges, `R_uu = Σ_{w~u} 1/ℓ_(w,u)`.
pub fn weighted_laplacian(mg: &MetricGraph) -> LaplacianMatrix {
    let g = mg.graph();
    let n = g.vertex_count();
    let mut m = Matrix::zeros(n);
    for (&(u, v), &len) in g.edges().iter().zip(mg.lengths()) {
        let w = 1.0 / len;
        m[(u, v)] = -w;
        m[(v, u)] = -w;
        m[(u, u)] += w;
        m[(v, v)] += w;
    }
    LaplacianMatrix { kind: LaplacianKind::Weighted, entries: m, degrees: g.degrees() }
}

/// `L / ℓ`, the weighted Laplacian of the equilateral graph with edge length `ℓ`.
pub fn equilateral_weighted_laplacian(g: &Graph, length: f64) -> LaplacianMatrix {
    let l = combinatorial_laplacian(g);
    LaplacianMatrix {
        kind: LaplacianKind::EquilateralWeighted,
        entries: l.entries.scaled(1.0 / length),
        degrees: l.degrees,
    }
}

/// Ascending real spectrum of a graph operator. The zero mode of a connected
/// graph sits at index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReal {
    pub eigenvalues: Vec<f64>,
    pub zero_index: usize,
}

impl SpectrumReal {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Eigenvalues with the zero mode removed.
    pub fn retained(&self) -> &[f64] {
        &self.eigenvalues[self.zero_index + 1..]
    }

    /// Second-smallest eigenvalue (algebraic connectivity for `L`).
    pub fn second(&self) -> f64 {
        self.eigenvalues[1]
    }

    pub fn largest(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }
}

/// Diagonalizes the symmetric form of `m` and checks every eigenpair's residual.
pub fn spectrum(m: &LaplacianMatrix) -> Result<SpectrumReal, SpectrumError> {
    let sym = m.symmetric_form();
    let eig = SymmetricEigen::new(&sym)?;
    eig.check_residuals(&sym, RESIDUAL_TOLERANCE)?;
    Ok(SpectrumReal { eigenvalues: eig.values, zero_index: 0 })
}

/// `ln det′`: sum of logs of the retained eigenvalues.
pub fn log_det_prime(s: &SpectrumReal) -> Result<f64, SpectrumError> {
    let mut acc = 0.0;
    for (offset, &value) in s.retained().iter().enumerate() {
        if value <= MIN_RETAINED_EIGENVALUE {
            return Err(SpectrumError::NonpositiveEigenvalue {
                index: s.zero_index + 1 + offset,
                value,
            });
        }
        acc += value.ln();
    }
    Ok(acc)
}

/// Product of the eigenvalues after the zero mode, accumulated in log space.
pub fn det_prime(s: &SpectrumReal) -> Result<f64, SpectrumError> {
    log_det_prime(s).map(f64::exp)
}

/// `det(M[i])`, the determinant with row and column `i` removed.
pub fn principal_minor(m: &LaplacianMatrix, i: usize) -> f64 {
    m.entries.minor(i).determinant()
}
