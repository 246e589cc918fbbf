//! Orthonormal polynomials from moments: recurrence coefficients, basis
//! rows, zeros, Gauss rules, kernel sums and coefficient-ratio diagnostics.

mod basis;
mod kernel;
mod quadrature;
mod ratio;
mod recurrence;
mod stieltjes_wigert;

pub use basis::{orthonormal_basis, OrthonormalBasis};
pub use kernel::{kernel_partial_sums, kernel_sum, kernel_sum_complex, point_mass_estimate};
pub use quadrature::{
    gauss_rule, interlacing_check, jacobi_matrix, zeros, InterlacingReport, JacobiMatrix,
    QuadratureRule,
};
pub use ratio::{ratio_table, RatioTable};
pub use recurrence::{chebyshev_recurrence, RecurrenceCoeffs};
pub use stieltjes_wigert::{
    sw_closed_form, sw_orthonormal, sw_ratio_closed_form, sw_ratio_limit, ScaledPoly,
};

use crate::error::Result;
use crate::measures::MomentSequence;

/// Basis of dimension `dim` straight from moments (needs order `2 dim - 1`).
pub fn basis_from_moments(s: &MomentSequence, dim: usize) -> Result<OrthonormalBasis> {
    orthonormal_basis(&chebyshev_recurrence(s, dim)?, dim)
}
