//! Exact vs approximate numeric path and the precision-doubling check.

use rug::Float;

use crate::arith::{ComplexScalar, Poly, Scalar, DEFAULT_PRECISION};
use crate::error::{Error, Result};

/// Which arithmetic a computation runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NumericPath {
    Exact,
    Approx { bits: u32 },
}

impl Default for NumericPath {
    fn default() -> Self {
        NumericPath::Exact
    }
}

impl NumericPath {
    pub fn approx(bits: u32) -> Self {
        NumericPath::Approx { bits }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NumericPath::Exact)
    }

    /// Working precision; exact runs still use it for anything irrational
    /// (square roots, eigenvalues).
    pub fn bits(&self) -> u32 {
        match self {
            NumericPath::Exact => DEFAULT_PRECISION,
            NumericPath::Approx { bits } => *bits,
        }
    }

    pub fn apply(&self, s: &Scalar) -> Scalar {
        match self {
            NumericPath::Exact => s.clone(),
            NumericPath::Approx { bits } => s.to_approx(*bits),
        }
    }

    pub fn apply_all(&self, v: &[Scalar]) -> Vec<Scalar> {
        v.iter().map(|s| self.apply(s)).collect()
    }

    pub fn doubled(&self) -> Self {
        match self {
            NumericPath::Exact => NumericPath::Exact,
            NumericPath::Approx { bits } => NumericPath::Approx { bits: 2 * bits },
        }
    }
}

/// `2^(-bits/2)`, the agreement tolerance for a `bits`-bit computation.
pub fn half_precision_tolerance(bits: u32) -> Float {
    Float::with_val(64, Float::i_exp(1, -((bits / 2) as i32)))
}

/// Largest relative discrepancy between two results of the same computation.
pub trait Agreement {
    fn max_rel_diff(&self, other: &Self, prec: u32) -> Float;
}

impl Agreement for Scalar {
    fn max_rel_diff(&self, other: &Self, prec: u32) -> Float {
        self.rel_diff(other, prec)
    }
}

impl Agreement for ComplexScalar {
    fn max_rel_diff(&self, other: &Self, prec: u32) -> Float {
        let a = self.re.max_rel_diff(&other.re, prec);
        let b = self.im.max_rel_diff(&other.im, prec);
        if a > b {
            a
        } else {
            b
        }
    }
}

impl<T: Agreement> Agreement for Vec<T> {
    fn max_rel_diff(&self, other: &Self, prec: u32) -> Float {
        if self.len() != other.len() {
            return Float::with_val(prec, f64::INFINITY);
        }
        self.iter()
            .zip(other)
            .map(|(a, b)| a.max_rel_diff(b, prec))
            .fold(Float::with_val(prec, 0), |m, x| if x > m { x } else { m })
    }
}

impl Agreement for Poly<Scalar> {
    fn max_rel_diff(&self, other: &Self, prec: u32) -> Float {
        let n = self.coeffs().len().max(other.coeffs().len());
        let a: Vec<Scalar> = (0..n).map(|k| self.coeff(k)).collect();
        let b: Vec<Scalar> = (0..n).map(|k| other.coeff(k)).collect();
        a.max_rel_diff(&b, prec)
    }
}

/// Runs `f` at `bits` and at `2 * bits` and accepts the `bits` result only if
/// the two agree to relative error below `2^(-bits/2)`.
pub fn revalidate<T, F>(context: &str, bits: u32, f: F) -> Result<T>
where
    T: Agreement,
    F: Fn(u32) -> Result<T>,
{
    let lo = f(bits)?;
    let hi = f(2 * bits)?;
    let diff = lo.max_rel_diff(&hi, 2 * bits);
    if diff < half_precision_tolerance(bits) {
        Ok(lo)
    } else {
        Err(Error::PrecisionCheck {
            context: context.to_string(),
            rel_err: diff.to_string_radix(10, Some(6)),
            bits,
        })
    }
}
