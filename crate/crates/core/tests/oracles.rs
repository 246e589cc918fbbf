//! Library output against oracles computed independently in this file.

use momentlab::arith::{q_pochhammer, Poly, Scalar};
use momentlab::measures::{moments, MeasureSpec};
use momentlab::orthopoly::{
    basis_from_moments, chebyshev_recurrence, gauss_rule, ratio_table, sw_closed_form,
    sw_orthonormal, sw_ratio_closed_form,
};
use rug::{Float, Integer, Rational};

const BITS: u32 = 256;

fn tol(bits: i32) -> Float {
    Float::with_val(64, Float::i_exp(1, -bits))
}

/// `E[exp(n T)]` for `T ~ N(v/2, v)`, `v = log(1/q)`, by composite Simpson
/// in `f64` over `mean +- 14 sd` (shifted by `n v` to follow the integrand).
fn lognormal_moment_by_quadrature(q: f64, n: u32) -> f64 {
    let v = -q.ln();
    let (mean, sd) = (v / 2.0, v.sqrt());
    let centre = mean + n as f64 * v;
    let (a, b) = (centre - 14.0 * sd, centre + 14.0 * sd);
    let steps = 20_000;
    let h = (b - a) / steps as f64;
    let g = |t: f64| {
        let z = (t - mean) / sd;
        (n as f64 * t - 0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
    };
    let mut acc = g(a) + g(b);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * g(a + i as f64 * h);
    }
    acc * h / 3.0
}

#[test]
fn lognormal_moments_match_numerical_integration() {
    for q in [Scalar::ratio(1, 2), Scalar::ratio(3, 4)] {
        let s = moments(&MeasureSpec::lognormal(q.clone()).unwrap(), 8).unwrap();
        for n in 0..=8u32 {
            let oracle = lognormal_moment_by_quadrature(q.to_f64(), n);
            let got = s.get(n as usize).to_f64();
            assert!(((got - oracle) / oracle).abs() < 1e-10, "q={q} n={n}: {got} vs {oracle}");
        }
    }
}

#[test]
fn stieltjes_wigert_dual_construction() {
    for q in [Scalar::ratio(1, 2), Scalar::ratio(3, 4)] {
        let spec = MeasureSpec::lognormal(q.clone()).unwrap();
        let s = moments(&spec, 25).unwrap();
        let basis = basis_from_moments(&s, 13).unwrap();
        for n in 0..13 {
            // monic rows agree exactly once the closed form is divided by its lead
            let closed = sw_closed_form(&q, n).unwrap();
            let lead = closed.body.leading().unwrap().clone();
            assert_eq!(*basis.monic(n), closed.body.scale(&lead.recip()), "q={q} n={n}");
            let from_moments = basis.row(n, BITS);
            let from_formula = sw_orthonormal(&q, n, BITS).unwrap();
            for k in 0..=n {
                let d = from_moments.coeff(k).rel_diff(&from_formula.coeff(k), BITS);
                assert!(d < tol(128), "q={q} n={n} k={k}");
            }
        }
    }
}

#[test]
fn stieltjes_wigert_ratios_from_moments() {
    let q = Scalar::ratio(1, 2);
    let s = moments(&MeasureSpec::lognormal(q.clone()).unwrap(), 25).unwrap();
    let table = ratio_table(&basis_from_moments(&s, 13).unwrap(), 4).unwrap();
    for (n, k, r) in table.entries() {
        assert_eq!(*r, sw_ratio_closed_form(&q, n, k).unwrap());
    }
}

/// `L_n(x) = sum_k (-1)^k C(n, k) x^k / k!`.
fn laguerre_coefficients(n: u32) -> Vec<Rational> {
    (0..=n)
        .map(|k| {
            let c = Rational::from((Integer::from(Integer::binomial_u(n, k)), Integer::from(Integer::factorial(k))));
            if k % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect()
}

#[test]
fn laguerre_ratios_match_closed_coefficients() {
    let s = moments(&MeasureSpec::Laguerre, 61).unwrap();
    let table = ratio_table(&basis_from_moments(&s, 31).unwrap(), 4).unwrap();
    for n in 1..=30u32 {
        let c = laguerre_coefficients(n);
        for k in 0..(n.min(5)) as usize {
            let oracle = Scalar::from_rational(Rational::from(&c[k] / &c[k + 1]));
            assert_eq!(*table.get(n as usize, k).unwrap(), oracle);
        }
    }
}

#[test]
fn uniform_ratios_closed_form() {
    // shifted Legendre: |gamma_{n,k}/gamma_{n,k+1}| = (k+1)^2 / ((n-k)(n+k+1))
    let s = moments(&MeasureSpec::UniformUnit, 41).unwrap();
    let table = ratio_table(&basis_from_moments(&s, 21).unwrap(), 4).unwrap();
    for (n, k, r) in table.entries() {
        let (n, k) = (n as i64, k as i64);
        assert_eq!(r.abs(), Scalar::ratio((k + 1) * (k + 1), (n - k) * (n + k + 1)));
    }
}

/// `e E_1(1) = int_0^inf e^(-x) / (1 + x) dx`.
fn gompertz_constant(bits: u32) -> Float {
    let e1 = -Float::with_val(bits, -1).eint();
    Float::with_val(bits, 1).exp() * e1
}

const GOMPERTZ_DIGITS: &str = "0.596347362323194074341078499369279376074177860152548781573485";

#[test]
fn laguerre_gauss_rules_converge_on_smooth_integrand() {
    let g = gompertz_constant(BITS);
    let frozen = Float::with_val(BITS, Float::parse(GOMPERTZ_DIGITS).unwrap());
    assert!(Float::with_val(BITS, &g - &frozen).abs() < tol(190));

    let s = moments(&MeasureSpec::Laguerre, 81).unwrap();
    let rc = chebyshev_recurrence(&s, 40).unwrap();
    let mut prev: Option<Float> = None;
    for n in 5..=40 {
        let rule = gauss_rule(&rc, n, BITS).unwrap();
        let approx = rule.integrate(|x| (Scalar::one() + x.clone()).recip());
        let err = Float::with_val(BITS, approx.to_float(BITS) - &g).abs();
        if let Some(p) = &prev {
            assert!(err < *p, "error grew at n = {n}");
        }
        prev = Some(err);
    }
    assert!(prev.unwrap() < 2e-10);
}

#[test]
fn pochhammer_limit_bounds_lognormal_kernel() {
    // K_N(0) = sum_{r<=N} q^r / (q;q)_r for q = 1/2
    let q = Scalar::ratio(1, 2);
    let s = moments(&MeasureSpec::lognormal(q.clone()).unwrap(), 41).unwrap();
    let basis = basis_from_moments(&s, 21).unwrap();
    let vals = basis.values_sq(&Scalar::zero(), 21);
    for (r, v) in vals.iter().enumerate() {
        assert_eq!(*v, &q.pow(r as u32) / &q_pochhammer(&q, r));
    }
}

#[test]
fn monic_rows_annihilate_lower_moments() {
    let spec = MeasureSpec::discrete(
        vec![Scalar::ratio(1, 3), Scalar::ratio(2, 3), Scalar::int(2), Scalar::int(5)],
        vec![Scalar::ratio(1, 10), Scalar::ratio(2, 5), Scalar::ratio(3, 10), Scalar::ratio(1, 5)],
    )
    .unwrap();
    let basis = basis_from_moments(&moments(&spec, 7).unwrap(), 4).unwrap();
    let (points, weights) = spec.atoms().unwrap();
    for n in 0..4 {
        let p: &Poly = basis.monic(n);
        for m in 0..n {
            let ip: Scalar = points
                .iter()
                .zip(weights)
                .map(|(x, w)| &(w * &p.eval(x)) * &x.pow(m as u32))
                .sum();
            assert!(ip.is_zero());
        }
    }
}
