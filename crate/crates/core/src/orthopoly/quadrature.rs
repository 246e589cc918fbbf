//! Jacobi matrices, zeros of `p_n` by Sturm-sequence bisection, and Gauss rules.

use rayon::prelude::*;
use rug::Float;

use super::recurrence::RecurrenceCoeffs;
use crate::arith::Scalar;
use crate::error::{Error, Result};
use crate::measures::MomentSequence;
use crate::precision::half_precision_tolerance;

/// Guard bits carried through bisection and mass evaluation.
const GUARD_BITS: u32 = 64;

/// Symmetric tridiagonal matrix with diagonal `a_0..a_{n-1}` and
/// off-diagonal `sqrt(b_1)..sqrt(b_{n-1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiMatrix {
    pub diag: Vec<Scalar>,
    /// Squared off-diagonal entries `b_1..b_{n-1}`.
    pub off_sq: Vec<Scalar>,
}

impl JacobiMatrix {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn off_diagonal(&self, bits: u32) -> Vec<Scalar> {
        self.off_sq.iter().map(|b| b.sqrt(bits)).collect()
    }

    pub fn to_dense(&self, bits: u32) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        let off = self.off_diagonal(bits);
        let mut m = vec![vec![Scalar::zero(); n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i].clone();
            if i + 1 < n {
                m[i][i + 1] = off[i].clone();
                m[i + 1][i] = off[i].clone();
            }
        }
        m
    }
}

pub fn jacobi_matrix(rc: &RecurrenceCoeffs, n: usize) -> Result<JacobiMatrix> {
    let rc = rc.truncate(n)?;
    Ok(JacobiMatrix { diag: rc.a_all().to_vec(), off_sq: rc.b_all().to_vec() })
}

struct SturmData {
    diag: Vec<Float>,
    off_sq: Vec<Float>,
    prec: u32,
}

impl SturmData {
    fn new(j: &JacobiMatrix, prec: u32) -> Self {
        SturmData {
            diag: j.diag.iter().map(|a| a.to_float(prec)).collect(),
            off_sq: j.off_sq.iter().map(|b| b.to_float(prec)).collect(),
            prec,
        }
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: &Float) -> usize {
        let p = self.prec;
        let tiny = Float::with_val(p, Float::i_exp(1, -2 * p as i32)) * (Float::with_val(p, x.abs_ref()) + 1u32);
        let mut count = 0;
        let mut d = Float::with_val(p, &self.diag[0] - x);
        for i in 0..self.diag.len() {
            if i > 0 {
                if d.is_zero() {
                    d.clone_from(&tiny);
                }
                let q = Float::with_val(p, &self.off_sq[i - 1] / &d);
                d = Float::with_val(p, &self.diag[i] - x);
                d -= q;
            }
            if d.is_sign_negative() && !d.is_zero() {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (Float, Float) {
        let p = self.prec;
        let n = self.diag.len();
        let off: Vec<Float> = self.off_sq.iter().map(|b| Float::with_val(p, b.sqrt_ref())).collect();
        let mut lo = Float::with_val(p, f64::INFINITY);
        let mut hi = Float::with_val(p, f64::NEG_INFINITY);
        for i in 0..n {
            let mut r = Float::with_val(p, 0);
            if i > 0 {
                r += &off[i - 1];
            }
            if i + 1 < n {
                r += &off[i];
            }
            let l = Float::with_val(p, &self.diag[i] - &r);
            let h = Float::with_val(p, &self.diag[i] + &r);
            if l < lo {
                lo = l;
            }
            if h > hi {
                hi = h;
            }
        }
        (lo - 1u32, hi + 1u32)
    }

    /// The `k`-th smallest eigenvalue (0-based) to full working precision.
    fn eigenvalue(&self, k: usize, mut lo: Float, mut hi: Float) -> Float {
        let p = self.prec;
        let max_iter = 8 * p as usize + 4096;
        for _ in 0..max_iter {
            let mid = Float::with_val(p, &lo + &hi) / 2u32;
            if mid == lo || mid == hi {
                break;
            }
            if self.count_below(&mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            let width = Float::with_val(p, &hi - &lo);
            let scale = if lo.clone().abs() > hi.clone().abs() { lo.clone().abs() } else { hi.clone().abs() };
            if width <= scale * Float::with_val(p, Float::i_exp(1, -(p as i32))) {
                break;
            }
        }
        Float::with_val(p, &lo + &hi) / 2u32
    }
}

fn zeros_at(j: &JacobiMatrix, prec: u32) -> Vec<Float> {
    let data = SturmData::new(j, prec);
    let (lo, hi) = data.gershgorin();
    (0..j.dim())
        .into_par_iter()
        .map(|k| data.eigenvalue(k, lo.clone(), hi.clone()))
        .collect()
}

fn strictly_increasing(v: &[Float]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

/// Zeros of `p_n`: the eigenvalues of the `n x n` Jacobi matrix in increasing
/// order, rounded to `bits`. A one-point rule is exact on exact input.
///
/// Bisection runs with guard bits; if the computed eigenvalues fail to
/// separate the run is repeated at doubled precision before giving up.
pub fn zeros(rc: &RecurrenceCoeffs, n: usize, bits: u32) -> Result<Vec<Scalar>> {
    let j = jacobi_matrix(rc, n)?;
    if n == 1 {
        return Ok(vec![j.diag[0].clone()]);
    }
    let mut prec = bits + GUARD_BITS;
    for _ in 0..2 {
        let z = zeros_at(&j, prec);
        if strictly_increasing(&z) {
            return Ok(z.into_iter().map(|x| Scalar::Approx(Float::with_val(bits, x))).collect());
        }
        prec *= 2;
    }
    Err(Error::Eigensolver(format!(
        "eigenvalues of the {n}x{n} Jacobi matrix did not separate at {prec} bits"
    )))
}

/// Gauss nodes and Christoffel masses.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<Scalar>,
    pub masses: Vec<Scalar>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn mass_sum(&self) -> Scalar {
        self.masses.iter().cloned().sum()
    }

    pub fn integrate<F: Fn(&Scalar) -> Scalar>(&self, f: F) -> Scalar {
        self.nodes.iter().zip(&self.masses).map(|(x, h)| h * &f(x)).sum()
    }

    /// `sum_j H_j x_j^m`.
    pub fn moment(&self, m: usize) -> Scalar {
        self.integrate(|x| x.pow(m as u32))
    }

    /// Largest relative error `|sum_j H_j x_j^m - s_m| / |s_m|` for
    /// `m <= 2n - 1`.
    pub fn exactness_defect(&self, s: &MomentSequence, bits: u32) -> Result<Float> {
        let top = 2 * self.len() - 1;
        s.require_order(top)?;
        let mut worst = Float::with_val(bits, 0);
        for m in 0..=top {
            let d = self.moment(m).rel_diff(s.get(m), bits);
            if d > worst {
                worst = d;
            }
        }
        Ok(worst)
    }

    /// All masses positive, mass sum equal to `s_0`, and moments through
    /// `2n - 1` reproduced within `2^(-bits/2)` relative.
    pub fn verify(&self, s: &MomentSequence, bits: u32) -> Result<()> {
        if let Some(h) = self.masses.iter().find(|h| !h.is_positive()) {
            return Err(Error::ArithmeticInvariant(format!("nonpositive Gauss mass {h}")));
        }
        let tol = half_precision_tolerance(bits);
        if self.mass_sum().rel_diff(s.total_mass(), bits) >= tol {
            return Err(Error::ArithmeticInvariant("Gauss masses do not sum to s_0".into()));
        }
        let d = self.exactness_defect(s, bits)?;
        if d >= tol {
            return Err(Error::ArithmeticInvariant(format!(
                "Gauss rule misses moments by relative {}",
                d.to_string_radix(10, Some(6))
            )));
        }
        Ok(())
    }
}

/// `n`-point Gauss rule: nodes at the zeros of `p_n`, masses
/// `H_j = 1 / sum_{r<n} p_r(x_j)^2`.
pub fn gauss_rule(rc: &RecurrenceCoeffs, n: usize, bits: u32) -> Result<QuadratureRule> {
    let rc = rc.truncate(n)?;
    if n == 1 {
        return Ok(QuadratureRule { nodes: vec![rc.a(0).clone()], masses: vec![rc.s0().clone()] });
    }
    let nodes = zeros(&rc, n, bits)?;
    let wp = bits + GUARD_BITS;
    let masses = nodes
        .par_iter()
        .map(|x| {
            let xw = x.to_approx(wp);
            let kernel: Scalar = rc
                .monic_values(&xw, n)
                .iter()
                .enumerate()
                .map(|(k, v)| &v.square() / &rc.norm_sq(k).to_approx(wp))
                .sum();
            kernel.recip().to_approx(bits)
        })
        .collect();
    Ok(QuadratureRule { nodes, masses })
}

/// Outcome of an interlacing test between zeros of `p_n` and `p_{n+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct InterlacingReport {
    pub holds: bool,
    /// Indices `j` where `z_{n+1,j} < z_{n,j} < z_{n+1,j+1}` fails.
    pub violations: Vec<usize>,
}

/// Strict interlacing `upper_j < lower_j < upper_{j+1}`. On approximate input
/// every gap must exceed `2^(-bits/2) (1 + |node|)`.
pub fn interlacing_check(lower: &[Scalar], upper: &[Scalar], bits: u32) -> InterlacingReport {
    if upper.len() != lower.len() + 1 {
        return InterlacingReport { holds: false, violations: (0..lower.len()).collect() };
    }
    let exact = lower.iter().chain(upper).all(Scalar::is_exact);
    let tol = Scalar::Approx(Float::with_val(bits, half_precision_tolerance(bits)));
    let gap_ok = |small: &Scalar, big: &Scalar| {
        let gap = big - small;
        if exact {
            gap.is_positive()
        } else {
            let margin = &tol * &(Scalar::one() + small.abs());
            gap > margin
        }
    };
    let violations: Vec<usize> = (0..lower.len())
        .filter(|&j| !(gap_ok(&upper[j], &lower[j]) && gap_ok(&lower[j], &upper[j + 1])))
        .collect();
    InterlacingReport { holds: violations.is_empty(), violations }
}
