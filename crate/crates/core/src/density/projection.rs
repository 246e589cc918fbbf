use std::ops::RangeInclusive;

use rug::Float;

use super::space::{L2Space, TargetFunction};
use crate::arith::linalg::{nested_residuals, Matrix, SymmetricFactor};
use crate::arith::{ComplexScalar, Poly, Scalar};
use crate::error::{Error, Result};
use crate::measures::{modulus_transform, IdealSpec};
use crate::orthopoly::basis_from_moments;
use crate::precision::{half_precision_tolerance, NumericPath};

/// Best approximant of a target from a finite slice of an ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionResult {
    pub approximant: Poly<ComplexScalar>,
    pub residual_sq: Scalar,
    /// Number of basis functions in the normal equations.
    pub gram_order: usize,
    /// Largest over smallest pivot (or norm); diagnostic only.
    pub conditioning: Scalar,
    /// `||f||^2`, the scale against which the residual is judged.
    pub target_norm_sq: Scalar,
}

impl ProjectionResult {
    /// The approximant when all its imaginary parts vanish.
    pub fn real_approximant(&self) -> Option<Poly> {
        self.approximant.as_real()
    }

    /// Jet test for monomial ideals, remainder test for root systems. On the
    /// approximate path the leftovers only need to be small relative to the
    /// approximant's coefficients.
    pub fn in_ideal(&self, ideal: &IdealSpec, bits: u32) -> Result<bool> {
        let leftover = match ideal {
            IdealSpec::Monomial { n: 0 } => Vec::new(),
            IdealSpec::Monomial { n } => self.approximant.jet_at_zero(n - 1),
            IdealSpec::RootSystem { .. } => {
                let (_, r) = self.approximant.div_rem(&ideal.generator())?;
                r.into_coeffs()
            }
        };
        if self.approximant.is_exact() {
            return Ok(leftover.iter().all(|c| c.re.is_zero() && c.im.is_zero()));
        }
        let scale = coeff_scale(&self.approximant, bits);
        let tol = Float::with_val(bits, &scale * &half_precision_tolerance(bits));
        Ok(leftover.iter().all(|c| {
            let m = Float::with_val(bits, c.norm_sq().to_float(bits).sqrt_ref());
            m <= tol
        }))
    }
}

fn coeff_scale(p: &Poly<ComplexScalar>, bits: u32) -> Float {
    p.coeffs()
        .iter()
        .map(|c| Float::with_val(bits, c.norm_sq().to_float(bits).sqrt_ref()))
        .fold(Float::with_val(bits, 1), |m, x| if x > m { x } else { m })
}

/// Largest `|lo_i - hi_i| / scale`.
fn scaled_gap(lo: &[Scalar], hi: &[Scalar], scale: &Float, prec: u32) -> Float {
    let mut worst = Float::with_val(prec, 0);
    for (a, b) in lo.iter().zip(hi) {
        let d = Float::with_val(prec, a.to_float(prec) - b.to_float(prec)).abs() / scale;
        if d > worst {
            worst = d;
        }
    }
    worst
}

fn doubling_error(context: &str, bits: u32, gap: Float) -> Error {
    Error::PrecisionCheck {
        context: context.to_string(),
        rel_err: gap.to_string_radix(10, Some(6)),
        bits,
    }
}

/// Runs `run` at `bits` and `2 * bits` and compares the projection results,
/// scaling residual gaps by `||f||^2` and coefficient gaps by the largest
/// coefficient, so members of the ideal (residual near zero) do not trip it.
fn revalidated_projection<F>(context: &str, path: NumericPath, run: F) -> Result<ProjectionResult>
where
    F: Fn(NumericPath) -> Result<ProjectionResult>,
{
    let lo = run(path)?;
    let NumericPath::Approx { bits } = path else { return Ok(lo) };
    let hi = run(path.doubled())?;
    let prec = 2 * bits;
    let tol = half_precision_tolerance(bits);
    let norm = {
        let n = lo.target_norm_sq.to_float(prec).abs();
        if n.is_zero() {
            Float::with_val(prec, 1)
        } else {
            n
        }
    };
    let res_gap = scaled_gap(
        std::slice::from_ref(&lo.residual_sq),
        std::slice::from_ref(&hi.residual_sq),
        &norm,
        prec,
    );
    let width = lo.approximant.coeffs().len().max(hi.approximant.coeffs().len());
    let split = |p: &Poly<ComplexScalar>| -> Vec<Scalar> {
        (0..width).flat_map(|k| {
            let c = p.coeff(k);
            [c.re, c.im]
        })
        .collect()
    };
    let coeff_gap = scaled_gap(
        &split(&lo.approximant),
        &split(&hi.approximant),
        &coeff_scale(&hi.approximant, prec),
        prec,
    );
    let gap = if res_gap > coeff_gap { res_gap } else { coeff_gap };
    if gap < tol {
        Ok(lo)
    } else {
        Err(doubling_error(context, bits, gap))
    }
}

/// Normal equations for a nested family of basis functions
/// `g * x^j`, `j = 0..dim`, with `g` the ideal generator.
struct NormalSystem {
    gram: Matrix,
    /// Real and (for complex generators) imaginary parts of `<f, g x^j>`.
    rhs: Vec<Vec<Scalar>>,
    norm_sq: Scalar,
    generator: Poly<ComplexScalar>,
}

fn check_truncation(ideal: &IdealSpec, n_trunc: usize) -> Result<usize> {
    let deg = ideal.degree();
    if deg > n_trunc {
        return Err(Error::InvalidParameter(format!(
            "truncation N = {n_trunc} is below the ideal degree {deg}"
        )));
    }
    Ok(n_trunc - deg + 1)
}

fn normal_system(
    space: &L2Space,
    f: &TargetFunction,
    ideal: &IdealSpec,
    n_trunc: usize,
) -> Result<NormalSystem> {
    let dim = check_truncation(ideal, n_trunc)?;
    let norm_sq = space.norm_sq(f)?;
    let path = space.path();
    match ideal {
        IdealSpec::Monomial { n } => {
            let s = space.moments(2 * n_trunc)?;
            let gram = (0..dim)
                .map(|i| (0..dim).map(|j| s.get(2 * n + i + j).clone()).collect())
                .collect();
            let rhs = vec![space.cross_moments(f, *n..=n_trunc)?];
            Ok(NormalSystem { gram, rhs, norm_sq, generator: ideal.generator() })
        }
        IdealSpec::RootSystem { .. } => {
            let s = space.moments(2 * n_trunc)?;
            let t = modulus_transform(&s, ideal)?;
            let gram = (0..dim)
                .map(|i| (0..dim).map(|j| t.get(i + j).clone()).collect())
                .collect();
            let generator = ideal.generator();
            let cross = space.cross_moments(f, 0..=n_trunc)?;
            // <f, R x^i> = sum_j conj(R_j) <f, x^(i+j)>
            let r: Vec<ComplexScalar> = generator
                .coeffs()
                .iter()
                .map(|c| ComplexScalar::new(path.apply(&c.re), path.apply(&c.im)))
                .collect();
            let mut re = Vec::with_capacity(dim);
            let mut im = Vec::with_capacity(dim);
            for i in 0..dim {
                let mut a = Scalar::zero();
                let mut b = Scalar::zero();
                for (j, rj) in r.iter().enumerate() {
                    a = &a + &(&rj.re * &cross[i + j]);
                    b = &b - &(&rj.im * &cross[i + j]);
                }
                re.push(a);
                im.push(b);
            }
            Ok(NormalSystem { gram, rhs: vec![re, im], norm_sq, generator })
        }
    }
}

fn solve_system(sys: NormalSystem) -> Result<ProjectionResult> {
    let factor = SymmetricFactor::factor(&sys.gram)?;
    let sols: Vec<Vec<Scalar>> = sys.rhs.iter().map(|b| factor.solve(b)).collect();
    let mut residual = sys.norm_sq.clone();
    for (c, b) in sols.iter().zip(&sys.rhs) {
        let dot: Scalar = c.iter().zip(b).map(|(x, y)| x * y).sum();
        residual = &residual - &dot;
    }
    let dim = factor.dim();
    let multiplier = Poly::new(
        (0..dim)
            .map(|j| {
                let re = sols[0][j].clone();
                let im = sols.get(1).map(|v| v[j].clone()).unwrap_or_else(Scalar::zero);
                ComplexScalar::new(re, im)
            })
            .collect(),
    );
    Ok(ProjectionResult {
        approximant: sys.generator.mul(&multiplier),
        residual_sq: residual,
        gram_order: dim,
        conditioning: factor.pivot_ratio(),
        target_norm_sq: sys.norm_sq,
    })
}

fn with_path(space: &L2Space, path: NumericPath) -> Result<L2Space> {
    L2Space::new(space.spec(), path)?.power_shifted(space.shift())
}

/// Best `L^2` approximant of `f` from `span{x^k}_{k=n..N}` or
/// `span{R(x) x^j}_{j=0..N-deg R}` via the normal equations.
pub fn ideal_distance(
    f: &TargetFunction,
    ideal: &IdealSpec,
    n_trunc: usize,
    space: &L2Space,
) -> Result<ProjectionResult> {
    revalidated_projection("ideal distance", space.path(), |path| {
        let sp = with_path(space, path)?;
        solve_system(normal_system(&sp, f, ideal, n_trunc)?)
    })
}

/// Splits `f` as `x^n g` with `g` a target in `L^2(x^(2n) dmu)`.
fn divide_target(f: &TargetFunction, n: usize, space: &L2Space) -> Result<TargetFunction> {
    let atom_route = |values: Vec<Scalar>| -> Result<TargetFunction> {
        let (points, _) = space
            .spec()
            .atoms()
            .ok_or_else(|| Error::Domain("atom values need a discrete measure".into()))?;
        if points.iter().any(Scalar::is_zero) {
            return Err(Error::Domain(
                "the measure has an atom at 0, so f x^(-n) is not defined almost everywhere".into(),
            ));
        }
        Ok(TargetFunction::AtomValues(
            values.iter().zip(points).map(|(v, x)| v / &x.pow(n as u32)).collect(),
        ))
    };
    match f {
        TargetFunction::Poly(p) => match p.shift_down(n) {
            Some(g) => Ok(TargetFunction::Poly(g)),
            None if space.spec().atoms().is_some() => {
                let (points, _) = space.spec().atoms().expect("checked");
                atom_route(points.iter().map(|x| p.eval(x)).collect())
            }
            None => Err(Error::Domain(format!(
                "f is not divisible by x^{n} and the measure is not a finite atom set"
            ))),
        },
        TargetFunction::AtomValues(v) => atom_route(v.clone()),
    }
}

/// The same projection as [`ideal_distance`] with a monomial ideal, built
/// the other way round: expand `f x^(-n)` in the orthonormal basis of
/// `x^(2n) dmu` through degree `N - n` and multiply back by `x^n`.
pub fn transformed_projection(
    f: &TargetFunction,
    n: usize,
    n_trunc: usize,
    space: &L2Space,
) -> Result<ProjectionResult> {
    let dim = check_truncation(&IdealSpec::monomial(n), n_trunc)?;
    let g = divide_target(f, n, space)?;
    revalidated_projection("transformed projection", space.path(), |path| {
        let nu = with_path(space, path)?.power_shifted(2 * n)?;
        let s = nu.moments(2 * dim - 1)?;
        let basis = basis_from_moments(&s, dim)?;
        let t = nu.cross_moments(&g, 0..dim)?;
        let norm_sq = nu.norm_sq(&g)?;
        let mut p = Poly::<Scalar>::zero();
        let mut residual = norm_sq.clone();
        for r in 0..dim {
            let pi = basis.monic(r);
            let tr: Scalar = pi.coeffs().iter().zip(&t).map(|(c, m)| c * m).sum();
            let h = basis.norm_sq(r);
            residual = &residual - &(&tr.square() / h);
            p = p.add(&pi.scale(&(&tr / h)));
        }
        Ok(ProjectionResult {
            approximant: p.shift_up(n).to_complex(),
            residual_sq: residual,
            gram_order: dim,
            conditioning: norm_spread(&basis, dim),
            target_norm_sq: norm_sq,
        })
    })
}

fn norm_spread(basis: &crate::orthopoly::OrthonormalBasis, dim: usize) -> Scalar {
    let h: Vec<&Scalar> = (0..dim).map(|r| basis.norm_sq(r)).collect();
    let hi = h.iter().max_by(|a, b| a.partial_cmp(b).unwrap()).unwrap();
    let lo = h.iter().min_by(|a, b| a.partial_cmp(b).unwrap()).unwrap();
    *hi / *lo
}

/// `(N, residual_sq)` over `range`, from one nested factorization.
pub fn residual_decay_curve(
    f: &TargetFunction,
    ideal: &IdealSpec,
    range: RangeInclusive<usize>,
    space: &L2Space,
) -> Result<Vec<(usize, Scalar)>> {
    let (lo_n, hi_n) = (*range.start(), *range.end());
    let deg = ideal.degree();
    if lo_n > hi_n || lo_n < deg {
        return Err(Error::InvalidParameter(format!(
            "residual range {lo_n}..={hi_n} must be nonempty and start at or above {deg}"
        )));
    }
    let run = |sp: &L2Space| -> Result<(Vec<Scalar>, Scalar)> {
        let sys = normal_system(sp, f, ideal, hi_n)?;
        let (res, _) = nested_residuals(&sys.gram, &sys.rhs, &sys.norm_sq)?;
        Ok((res, sys.norm_sq))
    };
    let (res, norm_sq) = run(space)?;
    if space.path().is_exact() {
        if let Some(k) = res.windows(2).position(|w| w[1] > w[0]) {
            return Err(Error::ArithmeticInvariant(format!(
                "residual increased from N = {} to N = {}",
                deg + k,
                deg + k + 1
            )));
        }
    } else {
        let bits = space.path().bits();
        let (hi, _) = run(&with_path(space, space.path().doubled())?)?;
        let prec = 2 * bits;
        let scale = {
            let n = norm_sq.to_float(prec).abs();
            if n.is_zero() {
                Float::with_val(prec, 1)
            } else {
                n
            }
        };
        let gap = scaled_gap(&res, &hi, &scale, prec);
        if gap >= half_precision_tolerance(bits) {
            return Err(doubling_error("residual curve", bits, gap));
        }
    }
    Ok((lo_n..=hi_n).map(|n| (n, res[n - deg].clone())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::MeasureSpec;

    fn exact(spec: &MeasureSpec) -> L2Space {
        L2Space::new(spec, NumericPath::Exact).unwrap()
    }

    fn two_atoms() -> MeasureSpec {
        MeasureSpec::discrete(vec![Scalar::zero(), Scalar::one()], vec![Scalar::ratio(1, 2); 2])
            .unwrap()
    }

    #[test]
    fn uniform_constant_into_first_ideal() {
        let sp = exact(&MeasureSpec::UniformUnit);
        let r = ideal_distance(&TargetFunction::one(), &IdealSpec::monomial(1), 1, &sp).unwrap();
        assert_eq!(r.residual_sq, Scalar::ratio(1, 4));
        assert_eq!(r.real_approximant().unwrap(), Poly::new(vec![Scalar::zero(), Scalar::ratio(3, 2)]));
        assert!(r.in_ideal(&IdealSpec::monomial(1), 256).unwrap());
        let t = transformed_projection(&TargetFunction::one(), 1, 1, &sp);
        // 1 is not divisible by x and the measure has no atoms
        assert_eq!(t.unwrap_err().code(), "E_DOMAIN");
    }

    #[test]
    fn atom_at_zero_example() {
        let sp = exact(&two_atoms());
        let r = ideal_distance(&TargetFunction::one(), &IdealSpec::monomial(1), 1, &sp).unwrap();
        assert_eq!(r.residual_sq, Scalar::ratio(1, 2));
    }

    #[test]
    fn members_have_zero_residual() {
        let sp = exact(&MeasureSpec::Laguerre);
        let f = TargetFunction::Poly(Poly::from_ints(&[0, 0, 1]));
        for n_trunc in 2..5 {
            let r = ideal_distance(&f, &IdealSpec::monomial(1), n_trunc, &sp).unwrap();
            assert!(r.residual_sq.is_zero());
            assert_eq!(r.real_approximant().unwrap(), Poly::from_ints(&[0, 0, 1]));
        }
        let x3 = TargetFunction::Poly(Poly::from_ints(&[0, 0, 0, 1]));
        let t = transformed_projection(&x3, 2, 4, &sp).unwrap();
        assert!(t.residual_sq.is_zero());
        assert_eq!(t.real_approximant().unwrap(), Poly::from_ints(&[0, 0, 0, 1]));
    }

    #[test]
    fn real_root_scalar_least_squares() {
        // minimize int_0^1 (1 - c(x-2))^2: c = <1, x-2> / ||x-2||^2 = (-3/2)/(7/3)
        let sp = exact(&MeasureSpec::UniformUnit);
        let ideal = IdealSpec::single_root(ComplexScalar::real(Scalar::int(2)));
        let r = ideal_distance(&TargetFunction::one(), &ideal, 1, &sp).unwrap();
        let c = Scalar::ratio(-9, 14);
        assert_eq!(r.real_approximant().unwrap(), Poly::new(vec![-(&c * &Scalar::int(2)), c]));
        assert_eq!(r.residual_sq, Scalar::one() - Scalar::ratio(9, 4) * Scalar::ratio(3, 7));
        assert!(r.in_ideal(&ideal, 256).unwrap());
    }

    #[test]
    fn complex_root_residuals() {
        let sp = exact(&MeasureSpec::UniformUnit);
        let ideal = IdealSpec::single_root(ComplexScalar::i());
        let curve = residual_decay_curve(&TargetFunction::one(), &ideal, 1..=2, &sp).unwrap();
        assert_eq!(curve[0].1, Scalar::ratio(1, 16));
        assert_eq!(curve[1].1, Scalar::ratio(1, 321));
        let r = ideal_distance(&TargetFunction::one(), &ideal, 2, &sp).unwrap();
        assert_eq!(r.residual_sq, Scalar::ratio(1, 321));
        assert!(r.in_ideal(&ideal, 256).unwrap());
        assert!(r.real_approximant().is_none());
    }

    #[test]
    fn solvers_agree_on_atoms() {
        let spec = MeasureSpec::discrete(
            vec![Scalar::ratio(1, 4), Scalar::ratio(1, 2), Scalar::one()],
            vec![Scalar::ratio(1, 3); 3],
        )
        .unwrap();
        let sp = exact(&spec);
        let f = TargetFunction::AtomValues(vec![Scalar::int(3), Scalar::int(-1), Scalar::ratio(2, 5)]);
        let a = ideal_distance(&f, &IdealSpec::monomial(1), 2, &sp).unwrap();
        let b = transformed_projection(&f, 1, 2, &sp).unwrap();
        assert_eq!(a.approximant, b.approximant);
        assert_eq!(a.residual_sq, b.residual_sq);
    }

    #[test]
    fn laguerre_residuals_are_reciprocals() {
        let sp = exact(&MeasureSpec::Laguerre);
        let curve = residual_decay_curve(&TargetFunction::one(), &IdealSpec::monomial(1), 1..=12, &sp)
            .unwrap();
        for (n, r) in curve {
            assert_eq!(r, Scalar::ratio(1, n as i64 + 1));
        }
    }

    #[test]
    fn float_path_matches_exact() {
        let spec = MeasureSpec::UniformUnit;
        let e = ideal_distance(&TargetFunction::one(), &IdealSpec::monomial(1), 6, &exact(&spec)).unwrap();
        let sp = L2Space::new(&spec, NumericPath::approx(256)).unwrap();
        let a = ideal_distance(&TargetFunction::one(), &IdealSpec::monomial(1), 6, &sp).unwrap();
        assert!(!a.residual_sq.is_exact());
        assert!(a.residual_sq.rel_diff(&e.residual_sq, 256) < half_precision_tolerance(256));
        assert!(a.in_ideal(&IdealSpec::monomial(1), 256).unwrap());
    }

    #[test]
    fn truncation_below_ideal_degree() {
        let sp = exact(&MeasureSpec::UniformUnit);
        let e = ideal_distance(&TargetFunction::one(), &IdealSpec::monomial(3), 2, &sp).unwrap_err();
        assert_eq!(e.code(), "E_INVALID_PARAMETER");
    }

    #[test]
    fn too_few_atoms_is_singular() {
        let sp = exact(&two_atoms());
        let e = ideal_distance(&TargetFunction::one(), &IdealSpec::monomial(1), 2, &sp).unwrap_err();
        assert_eq!(e.code(), "E_SINGULAR_GRAM");
    }
}
