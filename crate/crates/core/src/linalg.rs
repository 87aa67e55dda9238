//! Small dense real matrices: symmetric eigensolver (Householder
//! tridiagonalization followed by implicit QL) and LU determinants.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("symmetric QL iteration did not converge for eigenvalue {index}")]
    ConvergenceFailure { index: usize },
    #[error("eigenpair {index} residual {residual:e} exceeds {limit:e}")]
    Residual { index: usize, residual: f64, limit: f64 },
}

const MAX_QL_SWEEPS: usize = 60;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut m = Matrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has wrong length");
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { n: self.n, data }
    }

    pub fn scaled(&self, factor: f64) -> Matrix {
        Matrix { n: self.n, data: self.data.iter().map(|x| x * factor).collect() }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// The matrix with row and column `k` removed.
    pub fn minor(&self, k: usize) -> Matrix {
        let n = self.n - 1;
        let mut m = Matrix::zeros(n);
        for (i, si) in (0..self.n).filter(|&i| i != k).enumerate() {
            for (j, sj) in (0..self.n).filter(|&j| j != k).enumerate() {
                m[(i, j)] = self[(si, sj)];
            }
        }
        m
    }

    /// Determinant by LU factorization with partial pivoting.
    pub fn determinant(&self) -> f64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
                .unwrap_or(col);
            if a[pivot * n + col] == 0.0 {
                return 0.0;
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
                let factor = a[i * n + col] / p;
                if factor != 0.0 {
                    for j in col + 1..n {
                        a[i * n + j] -= factor * a[col * n + j];
                    }
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigen-decomposition of a real symmetric matrix. Eigenvalues ascend;
/// `vectors[(i, j)]` is component `i` of eigenvector `j`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl SymmetricEigen {
    pub fn new(m: &Matrix) -> Result<Self, LinalgError> {
        let n = m.dim();
        let mut z = m.clone();
        let mut d = vec![0.0; n];
        let mut e = vec![0.0; n];
        if n == 0 {
            return Ok(SymmetricEigen { values: d, vectors: z });
        }
        tridiagonalize(&mut z, &mut d, &mut e);
        tql2(&mut z, &mut d, &mut e)?;
        Ok(SymmetricEigen { values: d, vectors: z })
    }

    /// Eigenvector `j` as an owned column.
    pub fn vector(&self, j: usize) -> Vec<f64> {
        (0..self.vectors.dim()).map(|i| self.vectors[(i, j)]).collect()
    }

    /// Checks `|Mx - λx| <= rel_tol * |M|_F` for every pair.
    pub fn check_residuals(&self, m: &Matrix, rel_tol: f64) -> Result<(), LinalgError> {
        let limit = rel_tol * m.frobenius_norm().max(f64::MIN_POSITIVE);
        for (j, &lambda) in self.values.iter().enumerate() {
            let x = self.vector(j);
            let mx = m.mul_vec(&x);
            let residual = mx
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - lambda * b).powi(2))
                .sum::<f64>()
                .sqrt();
            if residual > limit {
                return Err(LinalgError::Residual { index: j, residual, limit });
            }
        }
        Ok(())
    }
}

/// Eigenvalues only, ascending.
pub fn symmetric_eigenvalues(m: &Matrix) -> Result<Vec<f64>, LinalgError> {
    SymmetricEigen::new(m).map(|e| e.values)
}

/// Largest absolute eigenvalue of a symmetric matrix, i.e. its spectral norm.
pub fn symmetric_spectral_norm(m: &Matrix) -> Result<f64, LinalgError> {
    let values = symmetric_eigenvalues(m)?;
    Ok(values.iter().fold(0.0, |acc: f64, v| acc.max(v.abs())))
}

// Householder reduction to tridiagonal form, accumulating the transform in
// `z`. On exit `d` holds the diagonal and `e[1..]` the subdiagonal.
fn tridiagonalize(z: &mut Matrix, d: &mut [f64], e: &mut [f64]) {
    let n = z.dim();
    for j in 0..n {
        d[j] = z[(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for x in &d[..i] {
            scale += x.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = z[(i - 1, j)];
                z[(i, j)] = 0.0;
                z[(j, i)] = 0.0;
            }
        } else {
            for x in &mut d[..i] {
                *x /= scale;
                h += *x * *x;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                z[(j, i)] = f;
                g = e[j] + z[(j, j)] * f;
                for k in j + 1..i {
                    g += z[(k, j)] * d[k];
                    e[k] += z[(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    z[(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = z[(i - 1, j)];
                z[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        z[(n - 1, i)] = z[(i, i)];
        z[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = z[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += z[(k, i + 1)] * z[(k, j)];
                }
                for k in 0..=i {
                    z[(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            z[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = z[(n - 1, j)];
        z[(n - 1, j)] = 0.0;
    }
    z[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

// Implicit QL on the tridiagonal form, then sort ascending.
fn tql2(z: &mut Matrix, d: &mut [f64], e: &mut [f64]) -> Result<(), LinalgError> {
    let n = z.dim();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_SWEEPS {
                    return Err(LinalgError::ConvergenceFailure { index: l });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        h = z[(k, i + 1)];
                        z[(k, i + 1)] = s * z[(k, i)] + c * h;
                        z[(k, i)] = c * z[(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // selection sort keeps eigenvector columns paired with their values
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            for row in 0..n {
                let tmp = z[(row, i)];
                z[(row, i)] = z[(row, k)];
                z[(row, k)] = tmp;
            }
        }
    }
    Ok(())
}
