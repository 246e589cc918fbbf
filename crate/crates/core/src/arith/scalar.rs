//! Real scalars: exact rationals or arbitrary-precision binary floats.
//!
//! Arithmetic between two exact values stays exact. Anything that touches
//! an approximate value is approximate, carried at the largest precision
//! among the operands.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Default working precision in bits for the approximate path.
pub const DEFAULT_PRECISION: u32 = 256;

#[derive(Clone, Debug)]
pub enum Scalar {
    /// Canonical rational (lowest terms, positive denominator; rug maintains this).
    Exact(Rational),
    /// Binary float with its own precision in bits.
    Approx(Float),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Rational::new())
    }

    pub fn one() -> Self {
        Scalar::Exact(Rational::from(1))
    }

    pub fn int(v: i64) -> Self {
        Scalar::Exact(Rational::from(v))
    }

    /// `num/den` as an exact value. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Exact(Rational::from((num, den)))
    }

    pub fn from_integer(v: Integer) -> Self {
        Scalar::Exact(Rational::from(v))
    }

    pub fn from_rational(v: Rational) -> Self {
        Scalar::Exact(v)
    }

    pub fn from_float(v: Float) -> Self {
        Scalar::Approx(v)
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        Scalar::Approx(Float::with_val(prec, v))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// Precision in bits of an approximate value, `None` when exact.
    pub fn precision(&self) -> Option<u32> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Approx(f) => Some(f.prec()),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Approx(_) => None,
        }
    }

    pub fn to_float(&self, prec: u32) -> Float {
        match self {
            Scalar::Exact(r) => Float::with_val(prec, r),
            Scalar::Approx(f) => Float::with_val(prec, f),
        }
    }

    /// Converts to the approximate path at `prec` bits. Approximate values are
    /// re-rounded to `prec`.
    pub fn to_approx(&self, prec: u32) -> Scalar {
        Scalar::Approx(self.to_float(prec))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64(),
            Scalar::Approx(f) => f.to_f64(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.cmp0() == Ordering::Equal,
            Scalar::Approx(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact(r) => *r == 1,
            Scalar::Approx(f) => *f == 1,
        }
    }

    pub fn sign(&self) -> Ordering {
        match self {
            Scalar::Exact(r) => r.cmp0(),
            Scalar::Approx(f) => f.cmp0().unwrap_or(Ordering::Equal),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.clone().abs()),
            Scalar::Approx(f) => Scalar::Approx(f.clone().abs()),
        }
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    /// Multiplicative inverse. Panics on an exact zero.
    pub fn recip(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => {
                assert!(r.cmp0() != Ordering::Equal, "reciprocal of exact zero");
                Scalar::Exact(r.clone().recip())
            }
            Scalar::Approx(f) => Scalar::Approx(f.clone().recip()),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.clone().pow(e)),
            Scalar::Approx(f) => Scalar::Approx(f.clone().pow(e)),
        }
    }

    /// Integer power with negative exponents allowed. Panics on `0^negative`.
    pub fn powi(&self, e: i64) -> Scalar {
        let mag = u32::try_from(e.unsigned_abs()).expect("exponent too large");
        let p = self.pow(mag);
        if e < 0 {
            p.recip()
        } else {
            p
        }
    }

    /// Square root. Exact when the value is the square of a rational;
    /// otherwise rounded to the operand precision, or to `prec` for exact input.
    /// Panics on negative input.
    pub fn sqrt(&self, prec: u32) -> Scalar {
        assert!(!self.is_negative(), "square root of a negative scalar");
        match self {
            Scalar::Exact(r) => {
                let (num, den) = (r.numer(), r.denom());
                if num.is_perfect_square() && den.is_perfect_square() {
                    let n = num.clone().sqrt();
                    let d = den.clone().sqrt();
                    Scalar::Exact(Rational::from((n, d)))
                } else {
                    Scalar::Approx(Float::with_val(prec, r).sqrt())
                }
            }
            Scalar::Approx(f) => Scalar::Approx(f.clone().sqrt()),
        }
    }

    /// `|a - b| / max(|a|, |b|)` as `f64`-free float, zero when both vanish.
    pub fn rel_diff(&self, other: &Scalar, prec: u32) -> Float {
        let a = self.to_float(prec);
        let b = other.to_float(prec);
        let diff = Float::with_val(prec, &a - &b).abs();
        let scale = std::cmp::max_by(a.abs(), b.abs(), |x, y| {
            x.partial_cmp(y).unwrap_or(Ordering::Equal)
        });
        if scale.is_zero() {
            diff
        } else {
            diff / scale
        }
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        match self {
            Scalar::Exact(r) if *r.denom() == 1 => r.numer().to_string(),
            _ => {
                let bits = ((digits as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 16;
                let f = self.to_float(bits);
                format_float(&f, digits)
            }
        }
    }

    /// Parses `"p/q"`, an integer, or a plain decimal (`"0.25"`, `"-1.5e-3"`)
    /// into an exact value.
    pub fn parse_exact(s: &str) -> Result<Scalar> {
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::Parse(s.to_string()));
        }
        if let Ok(r) = Rational::from_str(t) {
            return Ok(Scalar::Exact(r));
        }
        parse_decimal(t)
            .map(Scalar::Exact)
            .ok_or_else(|| Error::Parse(s.to_string()))
    }

    fn coerce_pair(a: &Scalar, b: &Scalar) -> (Float, Float) {
        let prec = match (a.precision(), b.precision()) {
            (Some(x), Some(y)) => x.max(y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => unreachable!("coerce_pair called on two exact scalars"),
        };
        (a.to_float(prec), b.to_float(prec))
    }
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num = Integer::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = Integer::from(10);
    let r = if scale >= 0 {
        Rational::from(num * ten.pow(scale as u32))
    } else {
        Rational::from((num, ten.pow((-scale) as u32)))
    };
    Some(r)
}

fn format_float(f: &Float, digits: usize) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    // rug emits "d.ddd" or "d.ddde<exp>"; keep its scientific form for extreme magnitudes
    f.to_string_radix(10, Some(digits.max(1)))
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Approx(x) => {
                let digits = (f64::from(x.prec()) * std::f64::consts::LOG10_2).ceil() as usize;
                f.write_str(&format_float(x, digits))
            }
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Some(a.cmp(b)),
            (Scalar::Approx(a), Scalar::Approx(b)) => a.partial_cmp(b),
            (Scalar::Approx(a), Scalar::Exact(b)) => a.partial_cmp(b),
            (Scalar::Exact(a), Scalar::Approx(b)) => b.partial_cmp(a).map(Ordering::reverse),
        }
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl From<Rational> for Scalar {
    fn from(v: Rational) -> Self {
        Scalar::Exact(v)
    }
}

impl From<Float> for Scalar {
    fn from(v: Float) -> Self {
        Scalar::Approx(v)
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(Rational::from(a $op b)),
                    _ => {
                        let (a, b) = Scalar::coerce_pair(self, rhs);
                        let prec = a.prec();
                        Scalar::Approx(Float::with_val(prec, &a $op &b))
                    }
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                assert!(b.cmp0() != Ordering::Equal, "exact division by zero");
                Scalar::Exact(Rational::from(a / b))
            }
            _ => {
                let (a, b) = Scalar::coerce_pair(self, rhs);
                let prec = a.prec();
                Scalar::Approx(Float::with_val(prec, &a / &b))
            }
        }
    }
}

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl<'a> Div<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        &self / rhs
    }
}

impl<'a> Div<Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        self / &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Approx(f) => Scalar::Approx(-f),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| acc * x)
    }
}

/// `2^(-bits)` as an exact value, handy for tolerances.
pub fn two_pow_neg(bits: u32) -> Scalar {
    Scalar::Exact(Rational::from((1, Integer::from(1) << bits)))
}
