//! Dense real vectors and matrices, plus the symmetric eigendecomposition
//! that every spectral operation in this crate rests on.
//!
//! Storage is dense row-major `f64`. Embedding dimensions are a few hundred
//! at most, so there is no need for sparse formats or iterative solvers.
//! Eigendecomposition uses the cyclic Jacobi method: it is simple, accurate
//! to machine precision for symmetric matrices, and fully deterministic.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::math::sqrt;

/// Maximum tolerated asymmetry `max |a_ij - a_ji|` for [`sym_eig`] input.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Eigenvalues of a nominally PSD matrix in `[-PSD_CLAMP_TOL, 0)` are
/// clamped to zero; anything lower is an error.
pub const PSD_CLAMP_TOL: f64 = 1e-10;

/// Fixed-length real vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    entries: Vec<f64>,
}

impl Vector {
    /// Wraps raw entries, rejecting NaN/Inf and zero length.
    pub fn new(entries: Vec<f64>) -> Result<Self, Error> {
        if entries.is_empty() {
            return Err(Error::EmptyData);
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: vec![0.0; dim],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.entries[i]
    }

    pub fn dot(&self, other: &Vector) -> Result<f64, Error> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn norm(&self) -> f64 {
        sqrt(self.norm_sq())
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum()
    }

    /// `self += coef * other`.
    pub fn add_scaled(&mut self, coef: f64, other: &Vector) -> Result<(), Error> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += coef * b;
        }
        Ok(())
    }

    pub fn scale_in_place(&mut self, coef: f64) {
        for a in &mut self.entries {
            *a *= coef;
        }
    }

    pub fn scaled(&self, coef: f64) -> Vector {
        let mut out = self.clone();
        out.scale_in_place(coef);
        out
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector, Error> {
        let mut out = self.clone();
        out.add_scaled(-1.0, other)?;
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &Vector) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn into_entries(self) -> Vec<f64> {
        self.entries
    }
}

impl core::ops::Index<usize> for Vector {
    type Output = f64;

    #[inline]
    fn index(&self, i: usize) -> &f64 {
        &self.entries[i]
    }
}

/// Dense row-major matrix with immutable dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major data, rejecting shape mismatches and
    /// non-finite entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, Error> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    /// Builds an `N x n` matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vector]) -> Result<Self, Error> {
        let n = columns.len();
        if n == 0 {
            return Err(Error::EmptyData);
        }
        let dim = columns[0].dim();
        for c in columns {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: c.dim(),
                });
            }
        }
        let mut m = Self::zeros(dim, n);
        for (j, c) in columns.iter().enumerate() {
            for i in 0..dim {
                m.set(i, j, c.get(i));
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector {
            entries: (0..self.rows).map(|i| self.get(i, j)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn matvec(&self, v: &Vector) -> Result<Vector, Error> {
        if v.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.dim(),
            });
        }
        let mut out = vec![0.0; self.rows];
        for (o, row) in out.iter_mut().zip(self.data.chunks_exact(self.cols)) {
            *o = row.iter().zip(v.as_slice()).map(|(a, b)| a * b).sum();
        }
        Ok(Vector { entries: out })
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix, Error> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += aik * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// `self + coef * other`, entrywise.
    pub fn add_scaled(&self, coef: f64, other: &Matrix) -> Result<Matrix, Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += coef * b;
        }
        Ok(out)
    }

    pub fn scaled(&self, coef: f64) -> Matrix {
        let mut out = self.clone();
        for a in &mut out.data {
            *a *= coef;
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.data.iter().map(|x| x * x).sum())
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols.min(self.rows) {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

/// Symmetric eigendecomposition result: orthonormal eigenvector columns and
/// eigenvalues sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomp {
    eigenvectors: Matrix,
    eigenvalues: Vec<f64>,
}

impl EigenDecomp {
    #[inline]
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvectors as matrix columns, ordered like the eigenvalues.
    #[inline]
    pub fn eigenvectors(&self) -> &Matrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> Vector {
        self.eigenvectors.column(k)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U diag(eigenvalues) U^T`.
    pub fn reconstruct(&self) -> Matrix {
        self.reconstruct_with(&self.eigenvalues)
    }

    /// `U diag(values) U^T` for caller-supplied diagonal values. The result
    /// is bitwise symmetric because entry `(i, j)` and `(j, i)` are computed
    /// by the same sequence of float operations.
    pub fn reconstruct_with(&self, values: &[f64]) -> Matrix {
        let n = self.dim();
        assert_eq!(values.len(), n, "diagonal length must match dimension");
        let u = &self.eigenvectors;
        let mut out = Matrix::zeros(n, n);
        for (k, &w) in values.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let wui = w * u.get(i, k);
                for j in 0..n {
                    out.data[i * n + j] += wui * u.get(j, k);
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a symmetric matrix by the cyclic Jacobi method.
///
/// The input must be square and symmetric within [`SYMMETRY_TOL`]; it is
/// symmetrized exactly before iterating. Eigenvalues come out sorted
/// descending, and each eigenvector's sign is fixed so that its
/// largest-magnitude entry is positive.
pub fn sym_eig(m: &Matrix) -> Result<EigenDecomp, Error> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let asym = m.max_asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::Asymmetric { max_abs: asym });
    }
    let n = m.rows;
    if n == 0 {
        return Err(Error::EmptyData);
    }

    // Work on the exactly symmetrized copy.
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        a.set(i, i, m.get(i, i));
        for j in (i + 1)..n {
            let v = 0.5 * (m.get(i, j) + m.get(j, i));
            a.set(i, j, v);
            a.set(j, i, v);
        }
    }

    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm();
    const MAX_SWEEPS: usize = 64;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q) * a.get(p, q);
            }
        }
        if sqrt(2.0 * off) <= f64::EPSILON * scale || off == 0.0 {
            break;
        }

        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                // Rotation angle that zeroes a[p][q].
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                let tau = s / (1.0 + c);

                let app = a.get(p, p);
                let aqq = a.get(q, q);
                a.set(p, p, app - t * apq);
                a.set(q, q, aqq + t * apq);
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);

                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a.get(r, p);
                    let arq = a.get(r, q);
                    let new_rp = arp - s * (arq + tau * arp);
                    let new_rq = arq + s * (arp - tau * arq);
                    a.set(r, p, new_rp);
                    a.set(p, r, new_rp);
                    a.set(r, q, new_rq);
                    a.set(q, r, new_rq);
                }
                for r in 0..n {
                    let vrp = v.get(r, p);
                    let vrq = v.get(r, q);
                    v.set(r, p, vrp - s * (vrq + tau * vrp));
                    v.set(r, q, vrq + s * (vrp - tau * vrq));
                }
            }
        }
    }

    // Sort descending; ties keep the lower original index first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(j, j)
            .partial_cmp(&a.get(i, i))
            .expect("eigenvalues are finite")
            .then(i.cmp(&j))
    });

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(a.get(src, src));
        // Sign convention: largest-magnitude entry positive (first such
        // entry wins on ties) for deterministic output.
        let mut best = 0usize;
        let mut best_mag = 0.0f64;
        for r in 0..n {
            let mag = v.get(r, src).abs();
            if mag > best_mag {
                best_mag = mag;
                best = r;
            }
        }
        let flip = if v.get(best, src) < 0.0 { -1.0 } else { 1.0 };
        for r in 0..n {
            eigenvectors.set(r, dst, flip * v.get(r, src));
        }
    }

    Ok(EigenDecomp {
        eigenvectors,
        eigenvalues,
    })
}

/// [`sym_eig`] for matrices that are PSD in exact arithmetic (covariances).
///
/// Eigenvalues in `[-PSD_CLAMP_TOL, 0)` are floating-point noise and get
/// clamped to zero; anything more negative is a hard error.
pub fn sym_eig_psd(m: &Matrix) -> Result<EigenDecomp, Error> {
    let mut decomp = sym_eig(m)?;
    for ev in &mut decomp.eigenvalues {
        if *ev < -PSD_CLAMP_TOL {
            return Err(Error::NegativeEigenvalue { value: *ev });
        }
        if *ev < 0.0 {
            *ev = 0.0;
        }
    }
    Ok(decomp)
}

/// Uncentered covariance `(1/n) X X^T` of an `N x n` data matrix whose
/// columns are observations. No mean subtraction.
pub fn uncentered_covariance(x: &Matrix) -> Result<Matrix, Error> {
    let n = x.cols;
    if n == 0 {
        return Err(Error::EmptyData);
    }
    let dim = x.rows;
    let inv_n = 1.0 / n as f64;
    let mut out = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let mut acc = 0.0;
            for k in 0..n {
                acc += x.get(i, k) * x.get(j, k);
            }
            let v = acc * inv_n;
            out.set(i, j, v);
            out.set(j, i, v);
        }
    }
    Ok(out)
}

/// Solves `a X = b` for symmetric positive-definite `a` via Cholesky.
pub fn solve_spd(a: &Matrix, b: &Matrix) -> Result<Matrix, Error> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let asym = a.max_asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::Asymmetric { max_abs: asym });
    }
    let n = a.rows;
    if b.rows != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.rows,
        });
    }

    // Lower-triangular Cholesky factor, a = L L^T.
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut acc = a.get(i, j);
            for k in 0..j {
                acc -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if acc <= 0.0 || !acc.is_finite() {
                    return Err(Error::NotPositiveDefinite);
                }
                l.set(i, j, sqrt(acc));
            } else {
                l.set(i, j, acc / l.get(j, j));
            }
        }
    }

    let mut x = Matrix::zeros(n, b.cols);
    for col in 0..b.cols {
        // Forward: L y = b[:, col]
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = b.get(i, col);
            for (k, &yk) in y.iter().enumerate().take(i) {
                acc -= l.get(i, k) * yk;
            }
            y[i] = acc / l.get(i, i);
        }
        // Back: L^T x = y
        for i in (0..n).rev() {
            let mut acc = y[i];
            for k in (i + 1)..n {
                acc -= l.get(k, i) * x.get(k, col);
            }
            x.set(i, col, acc / l.get(i, i));
        }
    }
    Ok(x)
}
