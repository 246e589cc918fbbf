//! Scalars, complex scalars, dense polynomials, q-series and the small
//! amount of dense linear algebra the rest of the crate needs.

pub mod coeff;
pub mod complex;
pub mod linalg;
pub mod poly;
pub mod qseries;
pub mod scalar;

pub use coeff::Coefficient;
pub use complex::ComplexScalar;
pub use poly::{modulus_square, Poly};
pub use qseries::{q_binomial, q_pochhammer};
pub use scalar::{two_pow_neg, Scalar, DEFAULT_PRECISION};
