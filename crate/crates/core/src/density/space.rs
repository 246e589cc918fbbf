use crate::arith::{Poly, Scalar};
use crate::error::{Error, Result};
use crate::measures::{moments, MeasureSpec, MomentSequence};
use crate::precision::NumericPath;

/// Function whose distance to an ideal is measured.
#[derive(Clone, Debug, PartialEq)]
pub enum TargetFunction {
    /// A polynomial, usable with any measure.
    Poly(Poly),
    /// Values at the atoms of a discrete measure, in atom order.
    AtomValues(Vec<Scalar>),
}

impl TargetFunction {
    /// The constant function one.
    pub fn one() -> Self {
        TargetFunction::Poly(Poly::one())
    }

    /// Degree for moment bookkeeping; atom data needs no moments.
    fn moment_degree(&self) -> usize {
        match self {
            TargetFunction::Poly(p) => p.degree().unwrap_or(0),
            TargetFunction::AtomValues(_) => 0,
        }
    }
}

/// `L^2(x^shift dmu)` for a measure specification, read through its moments
/// (and atoms, when it has them) on a chosen numeric path.
#[derive(Clone, Debug)]
pub struct L2Space {
    spec: MeasureSpec,
    shift: usize,
    path: NumericPath,
}

impl L2Space {
    pub fn new(spec: &MeasureSpec, path: NumericPath) -> Result<Self> {
        spec.validate()?;
        Ok(L2Space { spec: spec.clone(), shift: 0, path })
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn path(&self) -> NumericPath {
        self.path
    }

    pub fn bits(&self) -> usize {
        self.path.bits() as usize
    }

    /// `L^2(x^k dnu)` where `nu` is the current measure. For odd `k` the
    /// support must lie in `[0, inf)` for `x^k dnu` to be a positive measure.
    pub fn power_shifted(&self, k: usize) -> Result<Self> {
        if (self.shift + k) % 2 == 1 && !self.spec.supported_on_half_line() {
            return Err(Error::Domain(format!(
                "x^{k} d mu is not a positive measure unless the support lies in [0, inf)"
            )));
        }
        Ok(L2Space { spec: self.spec.clone(), shift: self.shift + k, path: self.path })
    }

    /// `s_0..s_order` of the (shifted) measure on the configured path.
    pub fn moments(&self, order: usize) -> Result<MomentSequence> {
        let raw = moments(&self.spec, order + self.shift)?;
        let shifted = MomentSequence::new(raw.as_slice()[self.shift..].to_vec())?;
        Ok(match self.path {
            NumericPath::Exact => shifted,
            NumericPath::Approx { bits } => shifted.to_approx(bits),
        })
    }

    /// Atoms with positive (shifted) weight, as `(point, weight)` pairs.
    pub fn atoms(&self) -> Option<Vec<(Scalar, Scalar)>> {
        let (points, weights) = self.spec.atoms()?;
        Some(
            points
                .iter()
                .zip(weights)
                .filter(|(x, _)| self.shift == 0 || !x.is_zero())
                .map(|(x, w)| {
                    let wk = w * &x.pow(self.shift as u32);
                    (self.path.apply(x), self.path.apply(&wk))
                })
                .collect(),
        )
    }

    pub fn has_atom_at_zero(&self) -> bool {
        self.atoms()
            .map(|a| a.iter().any(|(x, _)| x.is_zero()))
            .unwrap_or(false)
    }

    fn atom_values<'a>(&self, f: &'a TargetFunction) -> Result<Option<&'a [Scalar]>> {
        match f {
            TargetFunction::Poly(_) => Ok(None),
            TargetFunction::AtomValues(v) => {
                let (points, _) = self.spec.atoms().ok_or_else(|| {
                    Error::Domain("atom values need a discrete measure".into())
                })?;
                if v.len() != points.len() {
                    return Err(Error::InvalidParameter(format!(
                        "{} atom values for {} atoms",
                        v.len(),
                        points.len()
                    )));
                }
                Ok(Some(v))
            }
        }
    }

    /// `<f, x^k>` for `k` in `ks`.
    pub fn cross_moments(
        &self,
        f: &TargetFunction,
        ks: impl IntoIterator<Item = usize>,
    ) -> Result<Vec<Scalar>> {
        let ks: Vec<usize> = ks.into_iter().collect();
        let top = ks.iter().copied().max().unwrap_or(0);
        match self.atom_values(f)? {
            Some(values) => {
                let (points, weights) = self.spec.atoms().expect("checked above");
                let weighted: Vec<(Scalar, Scalar)> = points
                    .iter()
                    .zip(weights)
                    .zip(values)
                    .map(|((x, w), v)| {
                        let wv = &(w * v) * &x.pow(self.shift as u32);
                        (self.path.apply(x), self.path.apply(&wv))
                    })
                    .collect();
                Ok(ks
                    .iter()
                    .map(|&k| weighted.iter().map(|(x, wv)| wv * &x.pow(k as u32)).sum())
                    .collect())
            }
            None => {
                let TargetFunction::Poly(p) = f else { unreachable!() };
                let s = self.moments(top + f.moment_degree())?;
                let coeffs = self.path.apply_all(p.coeffs());
                Ok(ks
                    .iter()
                    .map(|&k| coeffs.iter().enumerate().map(|(j, c)| c * s.get(j + k)).sum())
                    .collect())
            }
        }
    }

    /// `||f||^2`.
    pub fn norm_sq(&self, f: &TargetFunction) -> Result<Scalar> {
        match self.atom_values(f)? {
            Some(values) => {
                let (points, weights) = self.spec.atoms().expect("checked above");
                Ok(points
                    .iter()
                    .zip(weights)
                    .zip(values)
                    .map(|((x, w), v)| self.path.apply(&(&(w * &v.square()) * &x.pow(self.shift as u32))))
                    .sum())
            }
            None => {
                let TargetFunction::Poly(p) = f else { unreachable!() };
                let d = f.moment_degree();
                let s = self.moments(2 * d)?;
                let c = self.path.apply_all(p.coeffs());
                let mut acc = Scalar::zero();
                for (i, ci) in c.iter().enumerate() {
                    for (j, cj) in c.iter().enumerate() {
                        acc = &acc + &(&(ci * cj) * s.get(i + j));
                    }
                }
                Ok(acc)
            }
        }
    }
}

/// `<f, x^k>` for `k` in `ks`, in `L^2(mu)`.
pub fn cross_moments(
    f: &TargetFunction,
    spec: &MeasureSpec,
    ks: impl IntoIterator<Item = usize>,
    path: NumericPath,
) -> Result<Vec<Scalar>> {
    L2Space::new(spec, path)?.cross_moments(f, ks)
}
