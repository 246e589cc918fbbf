//! Orthonormal polynomials, Gauss quadrature and weighted `L^2` distances to
//! polynomial ideals, computed from moment sequences in exact rational or
//! arbitrary-precision arithmetic.

pub mod arith;
pub mod density;
pub mod error;
pub mod measures;
pub mod orthopoly;
pub mod precision;

pub use arith::{ComplexScalar, Poly, Scalar};
pub use error::{Error, Result};
pub use measures::{IdealSpec, MeasureSpec, MomentSequence};
pub use precision::NumericPath;
