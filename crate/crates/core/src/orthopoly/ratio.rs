use super::basis::OrthonormalBasis;
use crate::arith::Scalar;
use crate::error::{Error, Result};

/// Coefficient ratios `gamma_{n,k} / gamma_{n,k+1}` for `k <= min(k_max, n-1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioTable {
    k_max: usize,
    rows: Vec<Vec<Scalar>>,
}

impl RatioTable {
    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Largest `n` with a row.
    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: usize, k: usize) -> Option<&Scalar> {
        self.rows.get(n).and_then(|r| r.get(k))
    }

    pub fn row(&self, n: usize) -> &[Scalar] {
        &self.rows[n]
    }

    /// `(n, k, ratio)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(n, r)| r.iter().enumerate().map(move |(k, v)| (n, k, v)))
    }
}

/// Ratios from the monic rows; the normalization cancels so exact moments
/// give exact ratios. Needs a basis with rows up to `n >= k_max + 1`.
pub fn ratio_table(basis: &OrthonormalBasis, k_max: usize) -> Result<RatioTable> {
    if basis.dim() < k_max + 2 {
        return Err(Error::InvalidParameter(format!(
            "ratio table with k_max = {k_max} needs rows through degree {}, basis has {}",
            k_max + 1,
            basis.dim().saturating_sub(1)
        )));
    }
    let mut rows = Vec::with_capacity(basis.dim());
    for n in 0..basis.dim() {
        let p = basis.monic(n);
        let mut row = Vec::new();
        for k in 0..n.min(k_max + 1) {
            let den = p.coeff(k + 1);
            if den.is_zero() {
                return Err(Error::ArithmeticInvariant(format!(
                    "vanishing coefficient gamma_{{{n},{}}}",
                    k + 1
                )));
            }
            row.push(&p.coeff(k) / &den);
        }
        rows.push(row);
    }
    Ok(RatioTable { k_max, rows })
}
