//! Crate-wide error type.

use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

/// Errors produced by any operation in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Vector or matrix dimensions do not conform.
    DimensionMismatch { expected: usize, got: usize },
    /// A square matrix was required.
    NotSquare { rows: usize, cols: usize },
    /// Input matrix is not symmetric within tolerance.
    Asymmetric { max_abs: f64 },
    /// A non-finite entry (NaN or infinity) was encountered.
    NonFinite,
    /// An operation received a matrix with no data columns.
    EmptyData,
    /// An eigenvalue of a nominally PSD matrix fell below the clamping tolerance.
    NegativeEigenvalue { value: f64 },
    /// Cholesky factorization failed; the matrix is not positive definite.
    NotPositiveDefinite,
    /// A scalar parameter is outside its valid range.
    InvalidParameter { name: &'static str, value: f64 },
    /// Requested number of zeroed components exceeds the dimension.
    ComponentCountOutOfRange { requested: usize, dim: usize },
    /// No in-vocabulary words were available to fit on.
    NoUsableWords,
    /// The corpus (or pair list) to embed was empty.
    EmptyCorpus,
    /// No composition methods were requested.
    NoMethods,
    /// Paired score lists have different lengths.
    LengthMismatch { left: usize, right: usize },
    /// Too few samples for a rank correlation.
    TooFewSamples { got: usize },
    /// Rank correlation is undefined because one side is constant.
    ConstantInput { side: &'static str },
    /// A per-method evaluation failure, tagged with the method label.
    InMethod { method: String, source: Box<Error> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::NotSquare { rows, cols } => {
                write!(f, "matrix is not square: {rows}x{cols}")
            }
            Error::Asymmetric { max_abs } => {
                write!(f, "matrix is not symmetric: max asymmetry {max_abs:e}")
            }
            Error::NonFinite => write!(f, "non-finite entry (NaN or infinity)"),
            Error::EmptyData => write!(f, "empty data: at least one column is required"),
            Error::NegativeEigenvalue { value } => {
                write!(
                    f,
                    "matrix is not positive semi-definite: eigenvalue {value:e}"
                )
            }
            Error::NotPositiveDefinite => write!(f, "matrix is not positive definite"),
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid parameter {name} = {value}")
            }
            Error::ComponentCountOutOfRange { requested, dim } => {
                write!(f, "cannot zero {requested} components in dimension {dim}")
            }
            Error::NoUsableWords => {
                write!(
                    f,
                    "no usable words: nothing in the corpus or stop-word set has an embedding"
                )
            }
            Error::EmptyCorpus => write!(f, "empty corpus"),
            Error::NoMethods => write!(f, "no composition methods requested"),
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::TooFewSamples { got } => {
                write!(f, "need at least 2 samples, got {got}")
            }
            Error::ConstantInput { side } => {
                write!(f, "rank correlation undefined: {side} values are all equal")
            }
            Error::InMethod { method, source } => {
                write!(f, "method `{method}`: {source}")
            }
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::InMethod { source, .. } => Some(source),
            _ => None,
        }
    }
}
