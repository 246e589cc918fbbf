//! Dense univariate polynomials in ascending power order.

use std::fmt;

use rug::{Float, Integer};

use super::coeff::Coefficient;
use super::complex::ComplexScalar;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Dense polynomial; `coeffs[k]` multiplies `x^k`. Trailing zeros are trimmed,
/// so the zero polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T = Scalar> {
    coeffs: Vec<T>,
}

impl<T: Coefficient> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(k: usize, c: T) -> Self {
        let mut v = vec![T::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    /// `x - root`.
    pub fn linear_factor(root: &T) -> Self {
        Poly::new(vec![root.negated(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(Coefficient::is_exact)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).plus(&rhs.coeff(k))).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).minus(&rhs.coeff(k))).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(Coefficient::negated).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![T::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly::new(v)
    }

    /// Divides by `x^k` when the low `k` coefficients vanish, `None` otherwise.
    pub fn shift_down(&self, k: usize) -> Option<Self> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Poly::new(self.coeffs.iter().skip(k).cloned().collect()))
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc.times(x).plus(c))
    }

    /// Formal derivative of the given order.
    pub fn derivative(&self, order: usize) -> Self {
        if order == 0 {
            return self.clone();
        }
        let mut out = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().skip(order) {
            // k! / (k - order)!
            let mut f = Integer::from(1);
            for m in (k - order + 1)..=k {
                f *= m as u64;
            }
            out.push(c.times(&T::from_scalar(Scalar::from_integer(f))));
        }
        Poly::new(out)
    }

    /// `(p(0), p'(0), ..., p^(n)(0))`: component `j` is `j! * coeffs[j]`.
    pub fn jet_at_zero(&self, n: usize) -> Vec<T> {
        let mut fact = Integer::from(1);
        (0..=n)
            .map(|j| {
                if j > 0 {
                    fact *= j as u64;
                }
                self.coeff(j)
                    .times(&T::from_scalar(Scalar::from_integer(fact.clone())))
            })
            .collect()
    }

    /// Euclidean division by a polynomial with invertible leading coefficient.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::Domain("division by the zero polynomial".into()))?;
        let lead_inv = divisor
            .leading()
            .and_then(Coefficient::try_recip)
            .ok_or_else(|| Error::Domain("divisor leading coefficient is not invertible".into()))?;
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if sd < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = rem[k + dd].times(&lead_inv);
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].minus(&c.times(d));
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }
}

impl Poly<Scalar> {
    pub fn from_ints(v: &[i64]) -> Self {
        Poly::new(v.iter().map(|&c| Scalar::int(c)).collect())
    }

    pub fn to_complex(&self) -> Poly<ComplexScalar> {
        Poly::new(self.coeffs.iter().cloned().map(ComplexScalar::real).collect())
    }

    pub fn to_approx(&self, prec: u32) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.to_approx(prec)).collect())
    }

    /// Evaluates a real polynomial at a complex point.
    pub fn eval_complex(&self, z: &ComplexScalar) -> ComplexScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(ComplexScalar::default(), |acc, c| {
                let t = &acc * z;
                ComplexScalar::new(&t.re + c, t.im)
            })
    }
}

impl Poly<ComplexScalar> {
    pub fn conj(&self) -> Self {
        Poly::new(self.coeffs.iter().map(ComplexScalar::conj).collect())
    }

    /// Real part of every coefficient; `None` if any imaginary part is nonzero.
    pub fn as_real(&self) -> Option<Poly<Scalar>> {
        self.coeffs
            .iter()
            .all(ComplexScalar::is_real)
            .then(|| Poly::new(self.coeffs.iter().map(|c| c.re.clone()).collect()))
    }

    pub fn to_approx(&self, prec: u32) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.to_approx(prec)).collect())
    }
}

/// `|R(x)|^2 = R(x) * conj(R)(x)` for real `x`, as a real polynomial.
///
/// The imaginary parts of the product cancel identically. On exact input any
/// residue is a hard error; on approximate input residues must stay below
/// `2^(-P/2)` relative to the largest coefficient.
pub fn modulus_square(r: &Poly<ComplexScalar>) -> Result<Poly<Scalar>> {
    let prod = r.mul(&r.conj());
    let exact = prod.is_exact();
    let prec = prod
        .coeffs()
        .iter()
        .filter_map(|c| c.re.precision().max(c.im.precision()))
        .max()
        .unwrap_or(0);
    if !exact {
        let scale = prod
            .coeffs()
            .iter()
            .map(|c| c.re.abs().to_float(prec))
            .fold(Float::with_val(prec, 0), |m, x| if x > m { x } else { m });
        let tol = scale * Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
        for c in prod.coeffs() {
            if c.im.abs().to_float(prec) > tol {
                return Err(Error::ArithmeticInvariant(format!(
                    "modulus square left imaginary residue {}",
                    c.im
                )));
            }
        }
    } else if let Some(c) = prod.coeffs().iter().find(|c| !c.im.is_zero()) {
        return Err(Error::ArithmeticInvariant(format!(
            "modulus square left exact imaginary residue {}",
            c.im
        )));
    }
    Ok(Poly::new(prod.coeffs().iter().map(|c| c.re.clone()).collect()))
}

impl<T: Coefficient + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}
