//! Measures, their moment sequences, ideal specifications, and the two
//! moment-level transforms `x^k dmu` and `|R(x)|^2 dmu`.

use std::fmt;

use crate::arith::{linalg, modulus_square, ComplexScalar, Poly, Scalar};
use crate::error::{Error, Result};
use crate::precision::revalidate;

/// Finite prefix `s_0..s_M` of a moment sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence {
    s: Vec<Scalar>,
}

impl MomentSequence {
    /// Requires at least `s_0`, and `s_0 > 0`. Hankel positivity is checked
    /// where the moments are consumed, up to the order actually used.
    pub fn new(s: Vec<Scalar>) -> Result<Self> {
        match s.first() {
            None => Err(Error::InvalidParameter("empty moment sequence".into())),
            Some(s0) if !s0.is_positive() => Err(Error::InvalidParameter(format!(
                "total mass s_0 = {s0} must be positive"
            ))),
            Some(_) => Ok(MomentSequence { s }),
        }
    }

    /// Like [`new`](Self::new), and additionally requires every Hankel
    /// matrix `H_n` with `2n <= M` to be positive definite.
    pub fn positive_definite(s: Vec<Scalar>) -> Result<Self> {
        let seq = MomentSequence::new(s)?;
        seq.check_positive_definite(seq.max_order() / 2)?;
        Ok(seq)
    }

    pub fn max_order(&self) -> usize {
        self.s.len() - 1
    }

    pub fn get(&self, k: usize) -> &Scalar {
        &self.s[k]
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.s
    }

    pub fn total_mass(&self) -> &Scalar {
        &self.s[0]
    }

    pub fn is_exact(&self) -> bool {
        self.s.iter().all(Scalar::is_exact)
    }

    pub fn require_order(&self, needed: usize) -> Result<()> {
        if needed > self.max_order() {
            return Err(Error::InsufficientMoments { needed, available: self.max_order() });
        }
        Ok(())
    }

    pub fn truncate(&self, m: usize) -> Result<Self> {
        self.require_order(m)?;
        Ok(MomentSequence { s: self.s[..=m].to_vec() })
    }

    pub fn to_approx(&self, bits: u32) -> Self {
        MomentSequence { s: self.s.iter().map(|x| x.to_approx(bits)).collect() }
    }

    /// All leading Hankel pivots through `order` strictly positive.
    pub fn check_positive_definite(&self, order: usize) -> Result<()> {
        self.require_order(2 * order)?;
        let pivots = linalg::hankel_pivots(&self.s, order);
        match pivots.iter().position(|p| !p.is_positive()) {
            Some(k) => Err(Error::NotPositiveDefinite { order: k, exact: self.is_exact() }),
            None => Ok(()),
        }
    }

    /// Positive leading pivots up to a possible exact zero (finite support);
    /// a negative pivot is an error. Returns the number of positive pivots.
    pub fn check_positive_semidefinite(&self) -> Result<usize> {
        let order = self.max_order() / 2;
        let pivots = linalg::hankel_pivots(&self.s, order);
        let positive = pivots.iter().take_while(|p| p.is_positive()).count();
        match pivots.get(positive) {
            Some(p) if p.is_negative() || !p.is_exact() => {
                Err(Error::NotPositiveDefinite { order: positive, exact: self.is_exact() })
            }
            _ => Ok(positive),
        }
    }
}

/// A measure on the real line, described by family or by data.
#[derive(Clone, Debug, PartialEq)]
pub enum MeasureSpec {
    /// Finitely many atoms with positive weights.
    DiscreteAtoms { points: Vec<Scalar>, weights: Vec<Scalar> },
    /// `e^{-x} dx` on `[0, inf)`.
    Laguerre,
    /// Stieltjes-Wigert lognormal density with parameter `0 < q < 1`,
    /// normalized to total mass one.
    Lognormal { q: Scalar },
    /// Lebesgue measure on `[0, 1]`.
    UniformUnit,
    RawMoments(MomentSequence),
}

impl MeasureSpec {
    pub fn discrete(points: Vec<Scalar>, weights: Vec<Scalar>) -> Result<Self> {
        let spec = MeasureSpec::DiscreteAtoms { points, weights };
        spec.validate()?;
        Ok(spec)
    }

    pub fn lognormal(q: Scalar) -> Result<Self> {
        let spec = MeasureSpec::Lognormal { q };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MeasureSpec::DiscreteAtoms { points, weights } => {
                if points.is_empty() || points.len() != weights.len() {
                    return Err(Error::InvalidParameter(format!(
                        "discrete measure needs equally many points and weights (got {} and {})",
                        points.len(),
                        weights.len()
                    )));
                }
                if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
                    return Err(Error::InvalidParameter(format!("atom weight {w} is not positive")));
                }
                for (i, a) in points.iter().enumerate() {
                    if points[..i].contains(a) {
                        return Err(Error::InvalidParameter(format!("repeated atom {a}")));
                    }
                }
                Ok(())
            }
            MeasureSpec::Lognormal { q } => {
                if q.is_positive() && *q < Scalar::one() {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!("lognormal q = {q} must lie in (0, 1)")))
                }
            }
            MeasureSpec::RawMoments(s) => s.check_positive_definite(s.max_order() / 2),
            MeasureSpec::Laguerre | MeasureSpec::UniformUnit => Ok(()),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            MeasureSpec::DiscreteAtoms { .. } => "atoms",
            MeasureSpec::Laguerre => "laguerre",
            MeasureSpec::Lognormal { .. } => "lognormal",
            MeasureSpec::UniformUnit => "uniform",
            MeasureSpec::RawMoments(_) => "raw",
        }
    }

    pub fn atoms(&self) -> Option<(&[Scalar], &[Scalar])> {
        match self {
            MeasureSpec::DiscreteAtoms { points, weights } => Some((points, weights)),
            _ => None,
        }
    }

    /// Number of support points, `None` for infinite or unknown support.
    pub fn support_size(&self) -> Option<usize> {
        self.atoms().map(|(p, _)| p.len())
    }

    /// Whether the support is known to lie in `[0, inf)`.
    pub fn supported_on_half_line(&self) -> bool {
        match self {
            MeasureSpec::DiscreteAtoms { points, .. } => points.iter().all(|p| !p.is_negative()),
            MeasureSpec::Laguerre | MeasureSpec::Lognormal { .. } | MeasureSpec::UniformUnit => true,
            MeasureSpec::RawMoments(_) => false,
        }
    }

    /// Whether the support is known to lie in `[0, 1]`.
    pub fn supported_on_unit_interval(&self) -> bool {
        match self {
            MeasureSpec::DiscreteAtoms { points, .. } => {
                points.iter().all(|p| !p.is_negative() && *p <= Scalar::one())
            }
            MeasureSpec::UniformUnit => true,
            _ => false,
        }
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureSpec::DiscreteAtoms { points, weights } => {
                let join = |v: &[Scalar]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
                write!(f, "atoms[{}|{}]", join(points), join(weights))
            }
            MeasureSpec::Lognormal { q } => write!(f, "lognormal[q={q}]"),
            MeasureSpec::RawMoments(s) => write!(f, "raw[M={}]", s.max_order()),
            other => f.write_str(other.family()),
        }
    }
}

/// `s_0..s_M` of the given measure.
///
/// Lognormal moments come from the substitution `x = e^u`, which turns
/// `int x^n x^{-1/2} exp((log x)^2 / (2 log q)) dx` into the Gaussian
/// integral `int exp(-c u^2 + (n + 1/2) u) du` with `c = 1 / (2 log(1/q))`,
/// equal to `sqrt(pi/c) q^{-(n+1/2)^2/2}`. Normalizing to `s_0 = 1` leaves
/// `s_n = q^{-n(n+1)/2}`, exact for rational `q`.
pub fn moments(spec: &MeasureSpec, max_order: usize) -> Result<MomentSequence> {
    spec.validate()?;
    let s: Vec<Scalar> = match spec {
        MeasureSpec::DiscreteAtoms { points, weights } => (0..=max_order)
            .map(|n| {
                points
                    .iter()
                    .zip(weights)
                    .map(|(x, w)| w * &x.pow(n as u32))
                    .sum()
            })
            .collect(),
        MeasureSpec::Laguerre => {
            let mut out = Vec::with_capacity(max_order + 1);
            let mut f = Scalar::one();
            for n in 0..=max_order {
                if n > 0 {
                    f = &f * &Scalar::int(n as i64);
                }
                out.push(f.clone());
            }
            out
        }
        MeasureSpec::Lognormal { q } => match q.precision() {
            None => lognormal_moments(q, max_order),
            Some(bits) => revalidate("lognormal moments", bits, |b| {
                Ok(lognormal_moments(&q.to_approx(b), max_order))
            })?,
        },
        MeasureSpec::UniformUnit => {
            (0..=max_order).map(|n| Scalar::ratio(1, n as i64 + 1)).collect()
        }
        MeasureSpec::RawMoments(seq) => return seq.truncate(max_order),
    };
    MomentSequence::new(s)
}

fn lognormal_moments(q: &Scalar, max_order: usize) -> Vec<Scalar> {
    let inv = q.recip();
    (0..=max_order)
        .map(|n| inv.pow((n * (n + 1) / 2) as u32))
        .collect()
}

/// Moments of `x^k dmu`: `s'_m = s_{m+k}`. Positivity of the result needs
/// support in `[0, inf)`, which the caller asserts.
pub fn power_shift(s: &MomentSequence, k: usize) -> Result<MomentSequence> {
    s.require_order(k)?;
    MomentSequence::new(s.as_slice()[k..].to_vec())
}

/// Polynomial ideal `span{x^k : k >= n}` or `R(x) C[x]`.
#[derive(Clone, Debug, PartialEq)]
pub enum IdealSpec {
    Monomial { n: usize },
    /// `R(x) = prod_j (x - z_j)^(k_j + 1)` over distinct roots.
    RootSystem { roots: Vec<(ComplexScalar, usize)> },
}

impl IdealSpec {
    pub fn monomial(n: usize) -> Self {
        IdealSpec::Monomial { n }
    }

    pub fn root_system(roots: Vec<(ComplexScalar, usize)>) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::InvalidParameter("root system needs at least one root".into()));
        }
        for (i, (z, _)) in roots.iter().enumerate() {
            if roots[..i].iter().any(|(w, _)| w == z) {
                return Err(Error::InvalidParameter(format!("repeated root {z}")));
            }
        }
        Ok(IdealSpec::RootSystem { roots })
    }

    /// Single root `z` of multiplicity one.
    pub fn single_root(z: ComplexScalar) -> Self {
        IdealSpec::RootSystem { roots: vec![(z, 0)] }
    }

    /// Degree of the generating polynomial.
    pub fn degree(&self) -> usize {
        match self {
            IdealSpec::Monomial { n } => *n,
            IdealSpec::RootSystem { roots } => roots.iter().map(|(_, k)| k + 1).sum(),
        }
    }

    /// `x^n` or `R(x)`.
    pub fn generator(&self) -> Poly<ComplexScalar> {
        match self {
            IdealSpec::Monomial { n } => Poly::monomial(*n, ComplexScalar::real(Scalar::one())),
            IdealSpec::RootSystem { roots } => roots.iter().fold(Poly::one(), |acc, (z, k)| {
                acc.mul(&Poly::linear_factor(z).pow(k + 1))
            }),
        }
    }
}

impl fmt::Display for IdealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealSpec::Monomial { n } => write!(f, "monomial[n={n}]"),
            IdealSpec::RootSystem { roots } => {
                let parts: Vec<String> = roots.iter().map(|(z, k)| format!("{z}^{}", k + 1)).collect();
                write!(f, "roots[{}]", parts.join(";"))
            }
        }
    }
}

/// Moments of `|R(x)|^2 dmu`: with `|R|^2 = sum_j q_j x^j`,
/// `s'_m = sum_j q_j s_{m+j}`.
pub fn modulus_transform(s: &MomentSequence, ideal: &IdealSpec) -> Result<MomentSequence> {
    if !matches!(ideal, IdealSpec::RootSystem { .. }) {
        return Err(Error::InvalidParameter("modulus transform needs a root system".into()));
    }
    let q = modulus_square(&ideal.generator())?;
    let deg = q.degree().unwrap_or(0);
    s.require_order(deg)?;
    let out: Vec<Scalar> = (0..=s.max_order() - deg)
        .map(|m| {
            q.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| c * s.get(m + j))
                .sum()
        })
        .collect();
    let seq = MomentSequence::new(out).map_err(|_| Error::NotPositiveDefinite {
        order: 0,
        exact: s.is_exact(),
    })?;
    seq.check_positive_semidefinite()?;
    Ok(seq)
}

/// `mu({x0})`; zero for the absolutely continuous families.
pub fn atom_mass(spec: &MeasureSpec, x0: &Scalar) -> Result<Scalar> {
    match spec {
        MeasureSpec::DiscreteAtoms { points, weights } => Ok(points
            .iter()
            .zip(weights)
            .find(|(p, _)| *p == x0)
            .map(|(_, w)| w.clone())
            .unwrap_or_else(Scalar::zero)),
        MeasureSpec::Laguerre | MeasureSpec::Lognormal { .. } | MeasureSpec::UniformUnit => {
            Ok(Scalar::zero())
        }
        MeasureSpec::RawMoments(_) => Err(Error::Unsupported(
            "point mass is not determined by finitely many moments".into(),
        )),
    }
}
