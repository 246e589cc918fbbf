use crate::arith::Scalar;
use crate::error::{Error, Result};
use crate::measures::MomentSequence;

/// Three-term recurrence `pi_{k+1} = (x - a_k) pi_k - b_k pi_{k-1}` with
/// `pi_0 = 1`, `pi_{-1} = 0`, for `k < depth`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceCoeffs {
    a: Vec<Scalar>,
    /// `b_1..b_{depth-1}`; `b[0]` holds `b_1`.
    b: Vec<Scalar>,
    s0: Scalar,
    /// `||pi_k||^2 = s_0 b_1 ... b_k` for `k < depth`.
    norms: Vec<Scalar>,
}

impl RecurrenceCoeffs {
    /// Builds from explicit coefficients; every `b_k` must be positive.
    pub fn new(a: Vec<Scalar>, b: Vec<Scalar>, s0: Scalar) -> Result<Self> {
        if a.is_empty() || b.len() + 1 != a.len() {
            return Err(Error::InvalidParameter(format!(
                "recurrence needs depth >= 1 and one fewer b than a (got {} and {})",
                a.len(),
                b.len()
            )));
        }
        if !s0.is_positive() {
            return Err(Error::InvalidParameter("total mass must be positive".into()));
        }
        if let Some(k) = b.iter().position(|x| !x.is_positive()) {
            return Err(Error::NotPositiveDefinite { order: k + 1, exact: b[k].is_exact() });
        }
        let mut norms = Vec::with_capacity(a.len());
        norms.push(s0.clone());
        for bk in &b {
            let next = norms.last().unwrap() * bk;
            norms.push(next);
        }
        Ok(RecurrenceCoeffs { a, b, s0, norms })
    }

    pub fn depth(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self, k: usize) -> &Scalar {
        &self.a[k]
    }

    /// `b_k` for `1 <= k < depth`.
    pub fn b(&self, k: usize) -> &Scalar {
        assert!(k >= 1, "b_0 is not part of the recurrence");
        &self.b[k - 1]
    }

    pub fn a_all(&self) -> &[Scalar] {
        &self.a
    }

    pub fn b_all(&self) -> &[Scalar] {
        &self.b
    }

    pub fn s0(&self) -> &Scalar {
        &self.s0
    }

    /// `||pi_k||^2` for `k < depth`.
    pub fn norm_sq(&self, k: usize) -> &Scalar {
        &self.norms[k]
    }

    pub fn is_exact(&self) -> bool {
        self.s0.is_exact() && self.a.iter().chain(&self.b).all(Scalar::is_exact)
    }

    /// First `depth` coefficients.
    pub fn truncate(&self, depth: usize) -> Result<Self> {
        self.require_depth(depth)?;
        Ok(RecurrenceCoeffs {
            a: self.a[..depth].to_vec(),
            b: self.b[..depth - 1].to_vec(),
            s0: self.s0.clone(),
            norms: self.norms[..depth].to_vec(),
        })
    }

    pub fn require_depth(&self, depth: usize) -> Result<()> {
        if depth == 0 || depth > self.depth() {
            return Err(Error::InvalidParameter(format!(
                "recurrence depth {} cannot supply {depth} terms",
                self.depth()
            )));
        }
        Ok(())
    }

    /// `pi_0(x), ..., pi_{count-1}(x)` by running the recurrence.
    pub fn monic_values(&self, x: &Scalar, count: usize) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(count);
        if count == 0 {
            return out;
        }
        out.push(Scalar::one());
        if count == 1 {
            return out;
        }
        out.push(x - &self.a[0]);
        for k in 1..count - 1 {
            let next = &(&(x - &self.a[k]) * &out[k]) - &(&self.b[k - 1] * &out[k - 1]);
            out.push(next);
        }
        out
    }
}

/// Chebyshev's algorithm: recurrence coefficients `a_0..a_{n-1}`,
/// `b_1..b_{n-1}` from the moments `s_0..s_{2n-1}`.
///
/// With `sigma_{k,l} = int pi_k x^l dmu` (so `sigma_{0,l} = s_l`),
/// `sigma_{k,l} = sigma_{k-1,l+1} - a_{k-1} sigma_{k-1,l} - b_{k-1} sigma_{k-2,l}`,
/// `a_k = sigma_{k,k+1}/sigma_{k,k} - sigma_{k-1,k}/sigma_{k-1,k-1}` and
/// `b_k = sigma_{k,k}/sigma_{k-1,k-1}`.
///
/// A nonpositive `sigma_{k,k}` is reported as [`Error::NotPositiveDefinite`];
/// its `exact` flag separates "fewer than `k + 1` support points" from
/// "precision exhausted".
pub fn chebyshev_recurrence(s: &MomentSequence, n: usize) -> Result<RecurrenceCoeffs> {
    if n == 0 {
        return Err(Error::InvalidParameter("recurrence depth must be positive".into()));
    }
    s.require_order(2 * n - 1)?;
    let exact = s.is_exact();
    let len = 2 * n;
    let mut prev2: Vec<Scalar> = vec![Scalar::zero(); len];
    let mut prev: Vec<Scalar> = s.as_slice()[..len].to_vec();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n.saturating_sub(1));
    a.push(&prev[1] / &prev[0]);
    for k in 1..n {
        let mut cur = vec![Scalar::zero(); len];
        let b_prev = if k == 1 { None } else { Some(&b[k - 2]) };
        for l in k..(2 * n - k) {
            let mut v = &prev[l + 1] - &(&a[k - 1] * &prev[l]);
            if let Some(bp) = b_prev {
                v = &v - &(bp * &prev2[l]);
            }
            cur[l] = v;
        }
        if !cur[k].is_positive() {
            return Err(Error::NotPositiveDefinite { order: k, exact });
        }
        a.push(&(&cur[k + 1] / &cur[k]) - &(&prev[k] / &prev[k - 1]));
        b.push(&cur[k] / &prev[k - 1]);
        prev2 = std::mem::replace(&mut prev, cur);
    }
    RecurrenceCoeffs::new(a, b, s.total_mass().clone())
}
