//! Closed-form orthonormal polynomials of the lognormal (Stieltjes-Wigert)
//! measure.

use crate::arith::{q_binomial, q_pochhammer, Poly, Scalar};
use crate::error::{Error, Result};
use crate::precision::revalidate;

/// `sqrt(scale_sq) * body`, keeping the irrational normalization separate.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledPoly {
    pub scale_sq: Scalar,
    pub body: Poly,
}

impl ScaledPoly {
    pub fn to_poly(&self, bits: u32) -> Poly {
        self.body.scale(&self.scale_sq.sqrt(bits))
    }
}

fn check_q(q: &Scalar) -> Result<()> {
    if q.is_positive() && *q < Scalar::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("q = {q} must lie in (0, 1)")))
    }
}

/// `p_n(x) = (-1)^n sqrt(q^n / (q;q)_n) sum_k [n k]_q (-1)^k q^(k^2) x^k`,
/// with the square root left symbolic.
pub fn sw_closed_form(q: &Scalar, n: usize) -> Result<ScaledPoly> {
    check_q(q)?;
    let scale_sq = &q.pow(n as u32) / &q_pochhammer(q, n);
    let body = Poly::new(
        (0..=n)
            .map(|k| {
                let c = &q_binomial(q, n, k) * &q.pow((k * k) as u32);
                if (n + k) % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect(),
    );
    Ok(ScaledPoly { scale_sq, body })
}

/// Closed-form `p_n` with numeric coefficients at `bits`, accepted only if a
/// rerun at `2 * bits` agrees to `2^(-bits/2)`.
pub fn sw_orthonormal(q: &Scalar, n: usize, bits: u32) -> Result<Poly> {
    check_q(q)?;
    revalidate("stieltjes-wigert closed form", bits, |b| {
        let qb = if q.is_exact() { q.clone() } else { q.to_approx(b) };
        Ok(sw_closed_form(&qb, n)?.to_poly(b))
    })
}

/// `gamma_{n,k} / gamma_{n,k+1} = -(1 - q^(k+1)) / ((1 - q^(n-k)) q^(2k+1))`.
pub fn sw_ratio_closed_form(q: &Scalar, n: usize, k: usize) -> Result<Scalar> {
    check_q(q)?;
    if k >= n {
        return Err(Error::InvalidParameter(format!("ratio index k = {k} must be below n = {n}")));
    }
    let num = Scalar::one() - q.pow(k as u32 + 1);
    let den = &(Scalar::one() - q.pow((n - k) as u32)) * &q.pow(2 * k as u32 + 1);
    Ok(-(&num / &den))
}

/// `n -> inf` limit of [`sw_ratio_closed_form`]: `-(1 - q^(k+1)) / q^(2k+1)`.
pub fn sw_ratio_limit(q: &Scalar, k: usize) -> Result<Scalar> {
    check_q(q)?;
    Ok(-(&(Scalar::one() - q.pow(k as u32 + 1)) / &q.pow(2 * k as u32 + 1)))
}
