use std::fmt::Debug;

use super::complex::ComplexScalar;
use super::scalar::Scalar;

/// Ring operations needed by [`Poly`](super::poly::Poly) coefficients.
pub trait Coefficient: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn try_recip(&self) -> Option<Self>;
    fn from_scalar(s: Scalar) -> Self;
    fn is_exact(&self) -> bool;
}

impl Coefficient for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn try_recip(&self) -> Option<Self> {
        (!Scalar::is_zero(self)).then(|| self.recip())
    }
    fn from_scalar(s: Scalar) -> Self {
        s
    }
    fn is_exact(&self) -> bool {
        Scalar::is_exact(self)
    }
}

impl Coefficient for ComplexScalar {
    fn zero() -> Self {
        ComplexScalar::default()
    }
    fn one() -> Self {
        ComplexScalar::real(Scalar::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn try_recip(&self) -> Option<Self> {
        ComplexScalar::try_recip(self)
    }
    fn from_scalar(s: Scalar) -> Self {
        ComplexScalar::real(s)
    }
    fn is_exact(&self) -> bool {
        ComplexScalar::is_exact(self)
    }
}
