use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use super::projection::residual_decay_curve;
use super::space::{L2Space, TargetFunction};
use crate::arith::{two_pow_neg, ComplexScalar, Scalar};
use crate::error::{Error, Result};
use crate::measures::IdealSpec;
use crate::orthopoly::{basis_from_moments, kernel_partial_sums, kernel_sum, OrthonormalBasis};
use crate::precision::half_precision_tolerance;

#[derive(Clone, Debug, PartialEq)]
pub struct DualityRow {
    pub n: usize,
    pub residual_sq: Scalar,
    pub kernel: Scalar,
    pub product: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualityReport {
    pub rows: Vec<DualityRow>,
    pub exact: bool,
}

/// Checks `dist(1, span{x^k}_{k=1..N})^2 * K_N(0) = 1` over `range`, with the
/// left factor from the Gram solve and the right from the orthonormal basis.
/// A mismatch is an arithmetic bug and fails hard.
pub fn christoffel_duality_check(space: &L2Space, range: RangeInclusive<usize>) -> Result<DualityReport> {
    let (lo, hi) = (*range.start(), *range.end());
    if lo == 0 || lo > hi {
        return Err(Error::InvalidParameter(format!(
            "duality range {lo}..={hi} must be nonempty and start at 1 or above"
        )));
    }
    let curve = residual_decay_curve(&TargetFunction::one(), &IdealSpec::monomial(1), range, space)?;
    let basis = basis_from_moments(&space.moments(2 * hi + 1)?, hi + 1)?;
    let exact = space.path().is_exact();
    let bits = space.path().bits();
    let mut rows = Vec::with_capacity(curve.len());
    for (n, residual_sq) in curve {
        let kernel = kernel_sum(&basis, &Scalar::zero(), n)?;
        let product = &residual_sq * &kernel;
        let ok = if exact {
            product.is_one()
        } else {
            (&product - &Scalar::one()).abs().to_float(bits) < half_precision_tolerance(bits)
        };
        if !ok {
            return Err(Error::ArithmeticInvariant(format!(
                "residual * K_{n}(0) = {product}, expected 1"
            )));
        }
        rows.push(DualityRow { n, residual_sq, kernel, product });
    }
    Ok(DualityReport { rows, exact })
}

/// Growth label for a kernel partial-sum curve. Always heuristic: finitely
/// many moments cannot decide determinacy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthClass {
    BoundedLooking,
    DivergingLooking,
    /// Fewer than two points on the curve.
    Undetermined,
}

impl GrowthClass {
    pub fn label(&self) -> &'static str {
        match self {
            GrowthClass::BoundedLooking => "bounded-looking (heuristic)",
            GrowthClass::DivergingLooking => "diverging-looking (heuristic)",
            GrowthClass::Undetermined => "undetermined (heuristic)",
        }
    }
}

impl fmt::Display for GrowthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Bounded-looking iff every increment in the last quarter of the curve is
/// below `2^(-threshold_bits)` times the running value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassificationRule {
    pub threshold_bits: u32,
}

impl ClassificationRule {
    /// Default threshold `2^(-P/8)` for working precision `P`.
    pub fn for_precision(bits: u32) -> Self {
        ClassificationRule { threshold_bits: bits / 8 }
    }

    pub fn classify(&self, curve: &[Scalar]) -> GrowthClass {
        let n = curve.len();
        if n < 2 {
            return GrowthClass::Undetermined;
        }
        let steps = n - 1;
        let tail = steps.div_ceil(4).max(1);
        let tol = two_pow_neg(self.threshold_bits);
        let bounded = (n - tail..n).all(|k| {
            let inc = &curve[k] - &curve[k - 1];
            inc < &tol * &curve[k]
        });
        if bounded {
            GrowthClass::BoundedLooking
        } else {
            GrowthClass::DivergingLooking
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeterminacyProbe {
    pub z: ComplexScalar,
    /// `K_0(z), ..., K_Nmax(z)`.
    pub curve: Vec<Scalar>,
    pub class: GrowthClass,
    pub rule: ClassificationRule,
}

impl DeterminacyProbe {
    /// `K_k(z) - K_(k-1)(z)` for `k = 1..=Nmax`.
    pub fn increments(&self) -> Vec<Scalar> {
        self.curve.windows(2).map(|w| &w[1] - &w[0]).collect()
    }
}

fn require_nonreal(z: &ComplexScalar) -> Result<()> {
    if z.im.is_zero() {
        return Err(Error::InvalidParameter(format!("z = {z} must have nonzero imaginary part")));
    }
    Ok(())
}

/// Partial sums `K_N(z)` at a non-real point with a heuristic growth label.
pub fn determinacy_probe(
    basis: &OrthonormalBasis,
    z: &ComplexScalar,
    n_max: usize,
    rule: ClassificationRule,
) -> Result<DeterminacyProbe> {
    require_nonreal(z)?;
    let curve = kernel_partial_sums(basis, z, n_max)?;
    let class = rule.classify(&curve);
    Ok(DeterminacyProbe { z: z.clone(), curve, class, rule })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityIndexRow {
    pub k: usize,
    pub probe: DeterminacyProbe,
    /// Residuals of `1` against `span{x^j}_{j>=1}` in `L^2(x^k dmu)`, `N = 1..=Nmax`.
    pub residuals: Vec<(usize, Scalar)>,
}

/// Per-`k` probes of `x^k dmu` for `k = 0..=k_max`, evaluated in parallel.
pub fn density_index_probe(
    space: &L2Space,
    k_max: usize,
    n_max: usize,
    z: &ComplexScalar,
    rule: ClassificationRule,
) -> Result<Vec<DensityIndexRow>> {
    require_nonreal(z)?;
    if !space.spec().supported_on_half_line() {
        return Err(Error::Domain("density index probes need support in [0, inf)".into()));
    }
    (0..=k_max)
        .into_par_iter()
        .map(|k| {
            let sk = space.power_shifted(k)?;
            let basis = basis_from_moments(&sk.moments(2 * n_max + 1)?, n_max + 1)?;
            let probe = determinacy_probe(&basis, z, n_max, rule)?;
            let residuals = if n_max >= 1 {
                residual_decay_curve(&TargetFunction::one(), &IdealSpec::monomial(1), 1..=n_max, &sk)?
            } else {
                Vec::new()
            };
            Ok(DensityIndexRow { k, probe, residuals })
        })
        .collect()
}

/// Residuals of `1` against `(x - z) C[x]` over `range`.
pub fn riesz_ideal_check(
    space: &L2Space,
    z: &ComplexScalar,
    range: RangeInclusive<usize>,
) -> Result<Vec<(usize, Scalar)>> {
    require_nonreal(z)?;
    residual_decay_curve(&TargetFunction::one(), &IdealSpec::single_root(z.clone()), range, space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::MeasureSpec;
    use crate::precision::NumericPath;

    fn exact(spec: &MeasureSpec) -> L2Space {
        L2Space::new(spec, NumericPath::Exact).unwrap()
    }

    #[test]
    fn duality_examples() {
        let atoms = MeasureSpec::discrete(
            vec![Scalar::zero(), Scalar::one()],
            vec![Scalar::ratio(1, 2); 2],
        )
        .unwrap();
        let r = christoffel_duality_check(&exact(&atoms), 1..=1).unwrap();
        assert_eq!(r.rows[0].residual_sq, Scalar::ratio(1, 2));
        assert_eq!(r.rows[0].kernel, Scalar::int(2));

        let r = christoffel_duality_check(&exact(&MeasureSpec::UniformUnit), 1..=3).unwrap();
        assert_eq!(r.rows[0].residual_sq, Scalar::ratio(1, 4));
        assert_eq!(r.rows[0].kernel, Scalar::int(4));
        assert!(r.rows.iter().all(|row| row.product.is_one()));

        let r = christoffel_duality_check(&exact(&MeasureSpec::Laguerre), 1..=8).unwrap();
        assert_eq!(r.rows.len(), 8);
    }

    #[test]
    fn duality_on_float_path() {
        let sp = L2Space::new(&MeasureSpec::Laguerre, NumericPath::approx(256)).unwrap();
        let r = christoffel_duality_check(&sp, 1..=6).unwrap();
        assert!(!r.exact);
    }

    #[test]
    fn probe_needs_nonreal_point() {
        let s = crate::measures::moments(&MeasureSpec::Laguerre, 3).unwrap();
        let b = basis_from_moments(&s, 2).unwrap();
        let rule = ClassificationRule::for_precision(256);
        assert!(determinacy_probe(&b, &ComplexScalar::real(Scalar::one()), 1, rule).is_err());
        let p = determinacy_probe(&b, &ComplexScalar::i(), 0, rule).unwrap();
        assert_eq!(p.curve, vec![Scalar::one()]);
        assert_eq!(p.class, GrowthClass::Undetermined);
    }

    #[test]
    fn classification_rule() {
        let rule = ClassificationRule { threshold_bits: 10 };
        let flat: Vec<Scalar> = (0..9).map(|k| Scalar::int(1000) - two_pow_neg(k)).collect();
        assert_eq!(rule.classify(&flat), GrowthClass::BoundedLooking);
        let growing: Vec<Scalar> = (1..10).map(Scalar::int).collect();
        assert_eq!(rule.classify(&growing), GrowthClass::DivergingLooking);
        assert!(GrowthClass::BoundedLooking.label().contains("heuristic"));
    }

    #[test]
    fn shift_zero_reproduces_plain_probes() {
        let sp = exact(&MeasureSpec::Laguerre);
        let rule = ClassificationRule::for_precision(256);
        let rows = density_index_probe(&sp, 2, 6, &ComplexScalar::i(), rule).unwrap();
        let basis = basis_from_moments(&sp.moments(13).unwrap(), 7).unwrap();
        let plain = determinacy_probe(&basis, &ComplexScalar::i(), 6, rule).unwrap();
        assert_eq!(rows[0].probe, plain);
        let plain_res =
            residual_decay_curve(&TargetFunction::one(), &IdealSpec::monomial(1), 1..=6, &sp).unwrap();
        assert_eq!(rows[0].residuals, plain_res);
        assert_eq!(rows.iter().map(|r| r.k).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn riesz_first_residual() {
        let r = riesz_ideal_check(&exact(&MeasureSpec::UniformUnit), &ComplexScalar::i(), 1..=1).unwrap();
        assert_eq!(r, vec![(1, Scalar::ratio(1, 16))]);
        assert!(riesz_ideal_check(&exact(&MeasureSpec::UniformUnit), &ComplexScalar::real(Scalar::one()), 1..=1).is_err());
    }
}
