//! Conceptor matrices and their soft complement projectors.
//!
//! A conceptor is the regularized identity map `C` minimizing
//!
//! ```text
//! (1/n) sum_i ||x_i - C x_i||^2  +  aperture_inv_sq * ||C||_F^2
//! ```
//!
//! with the closed form `C = R (R + aperture_inv_sq I)^-1` for
//! `R = (1/n) X X^T`. `C` shares eigenvectors with `R`, and its eigenvalues
//! are the shrunk variances `sigma / (sigma + aperture_inv_sq) ∈ [0, 1)`.
//! The complement `G = I - C` is a soft projector: it scales each principal
//! direction by `aperture_inv_sq / (sigma + aperture_inv_sq)`, attenuating
//! high-variance directions instead of zeroing them. Overriding the spectrum
//! with `D` exact zeros ([`Conceptor::hard_override`]) recovers classic hard
//! removal of the top `D` principal components.

use alloc::vec::Vec;

use crate::error::Error;
use crate::linalg::{sym_eig_psd, uncentered_covariance, EigenDecomp, Matrix, Vector};

// Documented eigenvalue interval of C is [0, 1); keep it open under round-off.
const EIGENVALUE_CEILING: f64 = 1.0 - 1e-15;

/// A fitted conceptor matrix together with its aperture and cached spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Conceptor {
    matrix: Matrix,
    aperture_inv_sq: f64,
    /// Spectrum of the source covariance `R`; eigenvectors are shared with
    /// the conceptor itself.
    source_spectrum: EigenDecomp,
    eigenvalues: Vec<f64>,
}

impl Conceptor {
    /// Fits a conceptor directly on a covariance matrix `R` that must be
    /// symmetric PSD. Computed through the spectral formula
    /// `U diag(sigma/(sigma+aperture_inv_sq)) U^T`, never by explicit
    /// inversion.
    pub fn from_covariance(r: &Matrix, aperture_inv_sq: f64) -> Result<Self, Error> {
        if aperture_inv_sq <= 0.0 || !aperture_inv_sq.is_finite() {
            return Err(Error::InvalidParameter {
                name: "aperture_inv_sq",
                value: aperture_inv_sq,
            });
        }
        let source_spectrum = sym_eig_psd(r)?;
        let eigenvalues: Vec<f64> = source_spectrum
            .eigenvalues()
            .iter()
            .map(|&sigma| (sigma / (sigma + aperture_inv_sq)).min(EIGENVALUE_CEILING))
            .collect();
        let matrix = source_spectrum.reconstruct_with(&eigenvalues);
        Ok(Self {
            matrix,
            aperture_inv_sq,
            source_spectrum,
            eigenvalues,
        })
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    #[inline]
    pub fn aperture_inv_sq(&self) -> f64 {
        self.aperture_inv_sq
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Eigenvalues of the conceptor itself, descending, each in `[0, 1)`.
    #[inline]
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvalues `sigma_i` of the source covariance, descending.
    #[inline]
    pub fn source_eigenvalues(&self) -> &[f64] {
        self.source_spectrum.eigenvalues()
    }

    /// Shared eigenvector columns of the conceptor and its source covariance.
    #[inline]
    pub fn eigenvectors(&self) -> &Matrix {
        self.source_spectrum.eigenvectors()
    }

    /// The soft complement `G = I - C`, computed entrywise so that
    /// `C + G = I` holds exactly.
    pub fn complement(&self) -> SoftProjector {
        let n = self.dim();
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let id = if i == j { 1.0 } else { 0.0 };
                g.set(i, j, id - self.matrix.get(i, j));
            }
        }
        SoftProjector {
            matrix: g,
            source: self.clone(),
        }
    }

    /// Overrides the spectrum with `zeroed` exact zeros followed by ones:
    /// `G' = U diag(0,..,0,1,..,1) U^T`. Applying the result removes the
    /// projection onto the top `zeroed` principal components exactly, the
    /// hard-removal baseline as a special case of the same machinery.
    pub fn hard_override(&self, zeroed: usize) -> Result<SoftProjector, Error> {
        let n = self.dim();
        if zeroed > n {
            return Err(Error::ComponentCountOutOfRange {
                requested: zeroed,
                dim: n,
            });
        }
        // I - U_{1:D} U_{1:D}^T is better conditioned than summing N-D
        // trailing outer products.
        let u = self.eigenvectors();
        let mut g = Matrix::identity(n);
        for k in 0..zeroed {
            for i in 0..n {
                let uik = u.get(i, k);
                for j in 0..n {
                    g.set(i, j, g.get(i, j) - uik * u.get(j, k));
                }
            }
        }
        Ok(SoftProjector {
            matrix: g,
            source: self.clone(),
        })
    }
}

/// Complement projector `G = I - C` applied to sentence vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftProjector {
    matrix: Matrix,
    source: Conceptor,
}

impl SoftProjector {
    #[inline]
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// The conceptor this projector was derived from.
    #[inline]
    pub fn source(&self) -> &Conceptor {
        &self.source
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `G v`.
    pub fn apply(&self, v: &Vector) -> Result<Vector, Error> {
        self.matrix.matvec(v)
    }
}

/// Fits a conceptor to an `N x n` data matrix whose columns are the
/// observations: `C = R (R + aperture_inv_sq I)^-1` with `R = (1/n) X X^T`.
pub fn compute_conceptor(data: &Matrix, aperture_inv_sq: f64) -> Result<Conceptor, Error> {
    let r = uncentered_covariance(data)?;
    Conceptor::from_covariance(&r, aperture_inv_sq)
}

/// The regularized reconstruction objective the conceptor minimizes:
/// `(1/n) sum_i ||x_i - c x_i||^2 + aperture_inv_sq ||c||_F^2`.
pub fn conceptor_objective(c: &Matrix, data: &Matrix, aperture_inv_sq: f64) -> Result<f64, Error> {
    if !c.is_square() {
        return Err(Error::NotSquare {
            rows: c.rows(),
            cols: c.cols(),
        });
    }
    if c.rows() != data.rows() {
        return Err(Error::DimensionMismatch {
            expected: c.rows(),
            got: data.rows(),
        });
    }
    let n = data.cols();
    if n == 0 {
        return Err(Error::EmptyData);
    }
    let mut reconstruction = 0.0;
    for k in 0..n {
        let x = data.column(k);
        let cx = c.matvec(&x)?;
        reconstruction += x.sub(&cx)?.norm_sq();
    }
    let fro = c.frobenius_norm();
    Ok(reconstruction / n as f64 + aperture_inv_sq * (fro * fro))
}
