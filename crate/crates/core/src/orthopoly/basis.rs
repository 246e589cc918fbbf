use rug::Float;

use super::recurrence::RecurrenceCoeffs;
use crate::arith::{ComplexScalar, Poly, Scalar};
use crate::error::{Error, Result};
use crate::measures::MomentSequence;

/// Orthonormal polynomials `p_0..p_{dim-1}` with positive leading coefficient.
///
/// Rows are stored as monic polynomials `pi_k` together with `||pi_k||^2`,
/// so that `p_k = pi_k / ||pi_k||`. Everything that is invariant under the
/// square-root normalization (coefficient ratios, `|p_k(x)|^2`, kernel sums)
/// stays exact on the exact path.
#[derive(Clone, Debug)]
pub struct OrthonormalBasis {
    rc: RecurrenceCoeffs,
    monic: Vec<Poly>,
}

/// Basis of dimension `dim` (rows `p_0..p_{dim-1}`); needs `rc.depth() >= dim`.
pub fn orthonormal_basis(rc: &RecurrenceCoeffs, dim: usize) -> Result<OrthonormalBasis> {
    let rc = rc.truncate(dim)?;
    let mut monic: Vec<Poly> = Vec::with_capacity(dim);
    monic.push(Poly::one());
    if dim > 1 {
        monic.push(Poly::new(vec![-rc.a(0), Scalar::one()]));
    }
    for k in 1..dim.saturating_sub(1) {
        let shifted = monic[k].shift_up(1);
        let next = shifted
            .sub(&monic[k].scale(rc.a(k)))
            .sub(&monic[k - 1].scale(rc.b(k)));
        monic.push(next);
    }
    Ok(OrthonormalBasis { rc, monic })
}

impl OrthonormalBasis {
    pub fn dim(&self) -> usize {
        self.monic.len()
    }

    pub fn recurrence(&self) -> &RecurrenceCoeffs {
        &self.rc
    }

    pub fn monic(&self, k: usize) -> &Poly {
        &self.monic[k]
    }

    pub fn norm_sq(&self, k: usize) -> &Scalar {
        self.rc.norm_sq(k)
    }

    pub fn is_exact(&self) -> bool {
        self.rc.is_exact()
    }

    /// `p_k` with coefficients `gamma_{k,0..k}`; exact when `||pi_k||^2` is a
    /// rational square, otherwise rounded to `bits`.
    pub fn row(&self, k: usize, bits: u32) -> Poly {
        let inv_norm = self.norm_sq(k).sqrt(bits).recip();
        self.monic[k].scale(&inv_norm)
    }

    /// `gamma_{k,j}`.
    pub fn gamma(&self, k: usize, j: usize, bits: u32) -> Scalar {
        &self.monic[k].coeff(j) / &self.norm_sq(k).sqrt(bits)
    }

    /// `|p_0(x)|^2, ..., |p_{count-1}(x)|^2`.
    pub fn values_sq(&self, x: &Scalar, count: usize) -> Vec<Scalar> {
        self.rc
            .monic_values(x, count)
            .iter()
            .enumerate()
            .map(|(k, v)| &v.square() / self.norm_sq(k))
            .collect()
    }

    /// `|p_0(z)|^2, ..., |p_{count-1}(z)|^2` at a complex point.
    pub fn values_sq_complex(&self, z: &ComplexScalar, count: usize) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(count);
        if count == 0 {
            return out;
        }
        let mut prev = ComplexScalar::default();
        let mut cur = ComplexScalar::real(Scalar::one());
        for k in 0..count {
            out.push(&cur.norm_sq() / self.norm_sq(k));
            if k + 1 == count {
                break;
            }
            let shifted = ComplexScalar::new(&z.re - self.rc.a(k), z.im.clone());
            let mut next = &shifted * &cur;
            if k >= 1 {
                next = &next - &prev.scale(self.rc.b(k));
            }
            prev = std::mem::replace(&mut cur, next);
        }
        out
    }

    /// `(-1)^(n-j) gamma_{n,j} > 0` for every stored row, the sign pattern of
    /// a polynomial whose zeros are all positive.
    pub fn has_alternating_signs(&self) -> bool {
        self.monic.iter().enumerate().all(|(n, p)| {
            (0..=n).all(|j| {
                let c = p.coeff(j);
                if (n - j) % 2 == 0 {
                    c.is_positive()
                } else {
                    c.is_negative()
                }
            })
        })
    }

    /// Largest `|<pi_m, pi_n> - delta_mn ||pi_n||^2| / (||pi_m|| ||pi_n||)`
    /// over all stored rows, computed by expansion against the moments.
    /// Exactly zero on an orthonormal exact-path basis.
    pub fn orthonormality_defect(&self, s: &MomentSequence, bits: u32) -> Result<Scalar> {
        let top = 2 * (self.dim() - 1);
        s.require_order(top)?;
        let mut worst = Scalar::zero();
        for m in 0..self.dim() {
            for n in 0..=m {
                let mut ip = Scalar::zero();
                for (j, cj) in self.monic[m].coeffs().iter().enumerate() {
                    for (k, ck) in self.monic[n].coeffs().iter().enumerate() {
                        ip = &ip + &(&(cj * ck) * s.get(j + k));
                    }
                }
                if m == n {
                    ip = &ip - self.norm_sq(n);
                }
                let scale = (self.norm_sq(m) * self.norm_sq(n)).sqrt(bits);
                let d = (&ip / &scale).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        Ok(worst)
    }

    /// Orthonormality to the tolerance of the path: exact zero on exact
    /// moments, `2^(-bits/2)` otherwise.
    pub fn verify_orthonormal(&self, s: &MomentSequence, bits: u32) -> Result<()> {
        let d = self.orthonormality_defect(s, bits)?;
        let ok = if d.is_exact() && s.is_exact() {
            d.is_zero()
        } else {
            d.to_float(64) < crate::precision::half_precision_tolerance(bits)
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ArithmeticInvariant(format!("orthonormality defect {d}")))
        }
    }

    /// Largest over smallest `||pi_k||^2`, a crude conditioning indicator.
    pub fn norm_spread(&self) -> Float {
        let bits = 64;
        let vals: Vec<Float> = (0..self.dim()).map(|k| self.norm_sq(k).to_float(bits)).collect();
        let max = vals.iter().cloned().fold(Float::with_val(bits, 0), |m, x| if x > m { x } else { m });
        let min = vals
            .iter()
            .cloned()
            .fold(Float::with_val(bits, f64::INFINITY), |m, x| if x < m { x } else { m });
        max / min
    }
}
