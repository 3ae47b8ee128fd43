//! Exact rational arithmetic: sparse Laurent polynomials and dense linear
//! algebra over the rationals.
//!
//! Nothing in this crate touches floating point. Every other module builds
//! its coordinate expressions, transition matrices and certificate searches
//! on the types here.

mod matrix;
mod poly;
mod polymatrix;
mod rational;

pub use matrix::{sparse_kernel, sparse_pivots, RatMatrix, SparseRow};
pub use poly::LaurentPoly;
pub(crate) use poly::var_order;
pub use polymatrix::PolyMatrix;
pub use rational::{parse_rational, rat, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    /// Evaluation on a locus where the expression has a pole.
    #[error("substituting 0 into `{0}`, which occurs with a negative exponent")]
    ZeroIntoNegativePower(String),
    #[error("`{0}` occurs with a negative exponent but its binding is not a monomial")]
    NotInvertible(String),
    #[error("linear system has no solution")]
    InconsistentSystem,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("malformed input: {0}")]
    Parse(String),
}
