//! Symmetric positive (semi)definite solves over [`Scalar`].

use super::scalar::Scalar;
use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<Scalar>>;

/// Diagonally pivoted `P A P^T = L D L^T` of a symmetric positive definite matrix.
#[derive(Clone, Debug)]
pub struct SymmetricFactor {
    perm: Vec<usize>,
    lower: Matrix,
    diag: Vec<Scalar>,
}

impl SymmetricFactor {
    /// At each step the largest remaining diagonal entry of the Schur
    /// complement is moved to the pivot position. A nonpositive pivot means
    /// the matrix is not positive definite.
    pub fn factor(a: &Matrix) -> Result<Self> {
        let n = a.len();
        let mut w: Matrix = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let exact = a.iter().flatten().all(Scalar::is_exact);
        let mut lower = vec![vec![Scalar::zero(); n]; n];
        let mut diag = Vec::with_capacity(n);
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| {
                    w[i][i]
                        .partial_cmp(&w[j][j])
                        .unwrap_or(std::cmp::Ordering::Equal)
                        .then(j.cmp(&i))
                })
                .expect("nonempty pivot range");
            if p != k {
                w.swap(p, k);
                for row in w.iter_mut() {
                    row.swap(p, k);
                }
                perm.swap(p, k);
                lower.swap(p, k);
            }
            let d = w[k][k].clone();
            if !d.is_positive() {
                return Err(Error::SingularGram { pivot: k, exact });
            }
            let d_inv = d.recip();
            lower[k][k] = Scalar::one();
            for i in k + 1..n {
                lower[i][k] = &w[i][k] * &d_inv;
            }
            for i in k + 1..n {
                if w[i][k].is_zero() {
                    continue;
                }
                for j in k + 1..=i {
                    let upd = &lower[i][k] * &w[j][k];
                    let v = &w[i][j] - &upd;
                    w[i][j] = v.clone();
                    w[j][i] = v;
                }
            }
            diag.push(d);
        }
        Ok(SymmetricFactor { perm, lower, diag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn pivots(&self) -> &[Scalar] {
        &self.diag
    }

    /// Largest over smallest pivot.
    pub fn pivot_ratio(&self) -> Scalar {
        pivot_spread(&self.diag)
    }

    pub fn solve(&self, b: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        assert_eq!(b.len(), n, "right-hand side has wrong length");
        let mut y: Vec<Scalar> = self.perm.iter().map(|&i| b[i].clone()).collect();
        for i in 0..n {
            let mut acc = y[i].clone();
            for j in 0..i {
                acc = &acc - &(&self.lower[i][j] * &y[j]);
            }
            y[i] = acc;
        }
        for (yi, d) in y.iter_mut().zip(&self.diag) {
            *yi = &*yi / d;
        }
        for i in (0..n).rev() {
            let mut acc = y[i].clone();
            for j in i + 1..n {
                acc = &acc - &(&self.lower[j][i] * &y[j]);
            }
            y[i] = acc;
        }
        let mut x = vec![Scalar::zero(); n];
        for (k, &i) in self.perm.iter().enumerate() {
            x[i] = y[k].clone();
        }
        x
    }
}

pub(crate) fn pivot_spread(pivots: &[Scalar]) -> Scalar {
    let max = pivots.iter().max_by(|a, b| a.partial_cmp(b).unwrap());
    let min = pivots.iter().min_by(|a, b| a.partial_cmp(b).unwrap());
    match (max, min) {
        (Some(hi), Some(lo)) if lo.is_positive() => hi / lo,
        _ => Scalar::one(),
    }
}

/// Residuals of projecting a vector onto the nested spans of the first
/// `1, 2, ..., n` basis vectors, given their Gram matrix, the inner products
/// of the target with each basis vector (one vector per real component of
/// the target), and the squared norm of the target.
///
/// Uses an unpivoted `L D L^T`, whose leading blocks factor the leading
/// Gram blocks. Returns `residual[k]` for the span of the first `k + 1`
/// vectors, plus the pivots.
pub fn nested_residuals(
    gram: &Matrix,
    rhs: &[Vec<Scalar>],
    norm_sq: &Scalar,
) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
    let n = gram.len();
    let exact = gram.iter().flatten().all(Scalar::is_exact);
    let mut lower = vec![vec![Scalar::zero(); n]; n];
    let mut diag: Vec<Scalar> = Vec::with_capacity(n);
    let mut ys: Vec<Vec<Scalar>> = rhs.iter().map(|_| Vec::with_capacity(n)).collect();
    let mut residuals = Vec::with_capacity(n);
    let mut current = norm_sq.clone();
    for k in 0..n {
        // row k of L (entries j < k) from L_kj d_j = G_kj - sum_{m<j} L_km L_jm d_m
        for j in 0..k {
            let mut acc = gram[k][j].clone();
            for m in 0..j {
                acc = &acc - &(&(&lower[k][m] * &lower[j][m]) * &diag[m]);
            }
            lower[k][j] = &acc / &diag[j];
        }
        let mut d = gram[k][k].clone();
        for m in 0..k {
            d = &d - &(&lower[k][m].square() * &diag[m]);
        }
        if !d.is_positive() {
            return Err(Error::SingularGram { pivot: k, exact });
        }
        for (y, b) in ys.iter_mut().zip(rhs) {
            let mut acc = b[k].clone();
            for m in 0..k {
                acc = &acc - &(&lower[k][m] * &y[m]);
            }
            current = &current - &(&acc.square() / &d);
            y.push(acc);
        }
        diag.push(d);
        residuals.push(current.clone());
    }
    Ok((residuals, diag))
}

/// Leading pivots `D_k / D_{k-1}` of the Hankel matrices `(s_{j+k})`, for
/// `k = 0..=order`, stopping after the first nonpositive pivot.
pub fn hankel_pivots(s: &[Scalar], order: usize) -> Vec<Scalar> {
    assert!(2 * order < s.len(), "not enough moments for Hankel order {order}");
    let n = order + 1;
    let mut w: Matrix = (0..n)
        .map(|i| (0..n).map(|j| s[i + j].clone()).collect())
        .collect();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let d = w[k][k].clone();
        let stop = !d.is_positive();
        pivots.push(d.clone());
        if stop {
            break;
        }
        for i in k + 1..n {
            let f = &w[i][k] / &d;
            for j in k + 1..n {
                let v = &w[i][j] - &(&f * &w[k][j]);
                w[i][j] = v;
            }
        }
    }
    pivots
}
