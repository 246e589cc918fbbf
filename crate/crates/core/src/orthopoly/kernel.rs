use super::basis::OrthonormalBasis;
use crate::arith::{ComplexScalar, Scalar};
use crate::error::{Error, Result};

fn require_rows(basis: &OrthonormalBasis, n: usize) -> Result<()> {
    if n >= basis.dim() {
        return Err(Error::InvalidParameter(format!(
            "kernel sum through degree {n} needs a basis of dimension {}, have {}",
            n + 1,
            basis.dim()
        )));
    }
    Ok(())
}

/// `K_N(x) = sum_{r<=N} p_r(x)^2`.
pub fn kernel_sum(basis: &OrthonormalBasis, x: &Scalar, n: usize) -> Result<Scalar> {
    require_rows(basis, n)?;
    Ok(basis.values_sq(x, n + 1).into_iter().sum())
}

/// `K_N(z) = sum_{r<=N} |p_r(z)|^2` at a complex point.
pub fn kernel_sum_complex(basis: &OrthonormalBasis, z: &ComplexScalar, n: usize) -> Result<Scalar> {
    require_rows(basis, n)?;
    Ok(basis.values_sq_complex(z, n + 1).into_iter().sum())
}

/// `K_0(z), ..., K_N(z)`.
pub fn kernel_partial_sums(basis: &OrthonormalBasis, z: &ComplexScalar, n: usize) -> Result<Vec<Scalar>> {
    require_rows(basis, n)?;
    let mut acc = Scalar::zero();
    Ok(basis
        .values_sq_complex(z, n + 1)
        .into_iter()
        .map(|v| {
            acc = &acc + &v;
            acc.clone()
        })
        .collect())
}

/// `1 / K_N(x)`: an upper bound on `mu({x})` that is attained in the limit
/// (and at finite `N` for a full basis of a discrete measure).
pub fn point_mass_estimate(basis: &OrthonormalBasis, x: &Scalar, n: usize) -> Result<Scalar> {
    Ok(kernel_sum(basis, x, n)?.recip())
}
