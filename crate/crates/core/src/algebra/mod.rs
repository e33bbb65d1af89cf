//! Exact and floating-point dense linear algebra.

mod combinatorics;
mod matrix;
mod scalar;

pub use combinatorics::{binomial, kronecker, step};
pub use matrix::{Matrix, NormKind, Vector};
pub use scalar::{rational_from_f64, rational_to_decimal, Mode, Rational, Scalar};

pub(crate) use scalar::json_kind;
