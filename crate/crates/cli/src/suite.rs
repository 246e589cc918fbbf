//! The acceptance battery behind `momentlab suite`. Each criterion is checked
//! by cross-validating independent library paths and a few frozen constants.

use std::time::Instant;

use momentlab::arith::{q_pochhammer, two_pow_neg};
use momentlab::density::{
    christoffel_duality_check, determinacy_probe, ideal_distance, residual_decay_curve,
    riesz_ideal_check, transformed_projection, ClassificationRule, GrowthClass, L2Space,
    TargetFunction,
};
use momentlab::measures::{moments, IdealSpec};
use momentlab::orthopoly::{
    basis_from_moments, chebyshev_recurrence, gauss_rule, interlacing_check, point_mass_estimate,
    ratio_table, sw_closed_form, sw_ratio_closed_form, sw_ratio_limit,
};
use momentlab::{ComplexScalar, MeasureSpec, NumericPath, Poly, Result, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const BITS: u32 = 256;
pub const SEED: u64 = 0x5eed_2024;
/// Residual bound for the complex-root ideal at `z = i`, `N = 30`, uniform measure.
pub const RIESZ_THRESHOLD: &str = "1e-39";

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<28} {}  {}",
            self.id,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

fn exact(spec: &MeasureSpec) -> L2Space {
    L2Space::new(spec, NumericPath::Exact).expect("built-in measure")
}

fn float_tol(bits: i32) -> rug::Float {
    rug::Float::with_val(64, rug::Float::i_exp(1, -bits))
}

/// Distinct positive atoms `k/8` and weights `w/7`.
pub fn random_atoms(rng: &mut ChaCha8Rng, m: usize, with_zero: Option<Scalar>) -> MeasureSpec {
    let mut pts: Vec<i64> = Vec::new();
    while pts.len() < m {
        let p = rng.gen_range(1..64);
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let mut points: Vec<Scalar> = pts.iter().map(|&p| Scalar::ratio(p, 8)).collect();
    let mut weights: Vec<Scalar> = (0..m).map(|_| Scalar::ratio(rng.gen_range(1..9), 7)).collect();
    if let Some(w0) = with_zero {
        points.push(Scalar::zero());
        weights.push(w0);
    }
    MeasureSpec::discrete(points, weights).expect("valid atoms")
}

fn c1() -> Result<Outcome> {
    let mut pass = true;
    let mut worst = rug::Float::with_val(BITS, 0);
    for q in [Scalar::ratio(1, 2), Scalar::ratio(3, 4)] {
        let spec = MeasureSpec::lognormal(q.clone())?;
        let s = moments(&spec, 25)?;
        let table = ratio_table(&basis_from_moments(&s, 13)?, 4)?;
        let approx = ratio_table(&basis_from_moments(&s.to_approx(BITS), 13)?, 4)?;
        for n in 1..=12 {
            let body = sw_closed_form(&q, n)?.body;
            for k in 0..n.min(5) {
                let closed = sw_ratio_closed_form(&q, n, k)?;
                // the square-root normalization cancels in a ratio of one row
                let from_formula = &body.coeff(k) / &body.coeff(k + 1);
                pass &= from_formula == closed && *table.get(n, k).unwrap() == closed;
                let d = approx.get(n, k).unwrap().rel_diff(&closed, BITS);
                if d > worst {
                    worst = d;
                }
            }
        }
        let limit0 = sw_ratio_limit(&q, 0)?;
        for k in 0..=4 {
            let limit = sw_ratio_limit(&q, k)?;
            let gaps: Vec<Scalar> = (k + 1..=12).map(|n| (table.get(n, k).unwrap() - &limit).abs()).collect();
            pass &= gaps.windows(2).all(|w| w[1] < w[0]) && !limit.is_zero();
        }
        pass &= limit0 == -(Scalar::one() - q.clone()) / q.clone();
    }
    pass &= worst < float_tol(128);
    Ok(Outcome {
        id: 1,
        name: "sw-ratio-reproduction",
        pass,
        detail: format!("exact match n<=12 k<=4; worst float rel err {}", worst.to_string_radix(10, Some(3))),
    })
}

fn c2() -> Result<Outcome> {
    let s = moments(&MeasureSpec::Laguerre, 121)?;
    let table = ratio_table(&basis_from_moments(&s, 61)?, 4)?;
    let mut pass = true;
    for n in 1..=60usize {
        for k in 0..n.min(5) {
            let expect = Scalar::ratio(((k + 1) * (k + 1)) as i64, (n - k) as i64);
            pass &= table.get(n, k).unwrap().abs() == expect;
        }
    }
    for k in 0..=4 {
        let mags: Vec<Scalar> = (2 * k + 2..=60).map(|n| table.get(n, k).unwrap().abs()).collect();
        pass &= mags.windows(2).all(|w| w[1] < w[0]);
    }
    Ok(Outcome { id: 2, name: "laguerre-ratio-decay", pass, detail: "n<=60 k<=4 exact".into() })
}

fn duality_all_one(spec: &MeasureSpec, n_max: usize) -> Result<bool> {
    let r = christoffel_duality_check(&exact(spec), 1..=n_max)?;
    Ok(r.rows.iter().all(|row| row.product.is_one()))
}

fn c3(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut pass = duality_all_one(&MeasureSpec::Laguerre, 20)? && duality_all_one(&MeasureSpec::UniformUnit, 20)?;
    let trials = 20;
    for _ in 0..trials {
        // 5 atoms give K_N for N <= 4 only
        pass &= duality_all_one(&random_atoms(rng, 5, None), 4)?;
    }
    Ok(Outcome {
        id: 3,
        name: "christoffel-duality",
        pass,
        detail: format!("laguerre/uniform N<=20, {trials} random 5-atom measures N<=4"),
    })
}

/// `(q;q)_inf` approximated by the product through `terms` factors.
fn pochhammer_limit(q: &Scalar, terms: usize) -> Scalar {
    q_pochhammer(&q.to_approx(BITS), terms)
}

fn c4() -> Result<Outcome> {
    let one = TargetFunction::one();
    let lag = residual_decay_curve(&one, &IdealSpec::monomial(1), 1..=20, &exact(&MeasureSpec::Laguerre))?;
    let mut pass = lag.iter().all(|(n, r)| *r == Scalar::ratio(1, *n as i64 + 1));
    pass &= lag.last().unwrap().1 < Scalar::ratio(1, 20);

    let q = Scalar::ratio(1, 2);
    let limit = pochhammer_limit(&q, 400);
    let ln = residual_decay_curve(&one, &IdealSpec::monomial(1), 1..=60, &exact(&MeasureSpec::lognormal(q)?))?;
    let floor = &Scalar::ratio(9, 10) * &limit;
    pass &= ln.iter().all(|(_, r)| *r > limit && *r > floor);
    let last = &ln.last().unwrap().1;
    Ok(Outcome {
        id: 4,
        name: "density-contrast",
        pass,
        detail: format!(
            "laguerre N=20 residual 1/21; lognormal N=60 residual {} vs limit {}",
            last.to_decimal(12),
            limit.to_decimal(12)
        ),
    })
}

fn c5(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let one = TargetFunction::one();
    let half = Scalar::ratio(1, 2);
    let mut pass = true;
    let mut specs = vec![MeasureSpec::discrete(
        vec![Scalar::zero(), Scalar::one()],
        vec![half.clone(), half.clone()],
    )?];
    for m in 2..=6 {
        specs.push(random_atoms(rng, m, Some(half.clone())));
    }
    for spec in &specs {
        let nonzero = spec.support_size().unwrap() - 1;
        let curve = residual_decay_curve(&one, &IdealSpec::monomial(1), 1..=nonzero, &exact(spec))?;
        pass &= curve.iter().all(|(_, r)| *r >= half);
        // once x, ..., x^N span the nonzero atoms the bound is attained
        pass &= curve.last().unwrap().1 == half;
    }
    Ok(Outcome { id: 5, name: "atom-at-zero-obstruction", pass, detail: format!("{} measures, exact", specs.len()) })
}

fn c6(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let instances = 120;
    let mut agree = 0;
    for _ in 0..instances {
        let m = rng.gen_range(3..=8);
        let spec = random_atoms(rng, m, None);
        let deg = rng.gen_range(0..=3);
        let f = Poly::new((0..=deg).map(|_| Scalar::ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4))).collect());
        let n = rng.gen_range(0..=3usize);
        let n_trunc = rng.gen_range(n..=(n + m - 1).min(10));
        let sp = exact(&spec);
        let f = TargetFunction::Poly(f);
        let a = ideal_distance(&f, &IdealSpec::monomial(n), n_trunc, &sp)?;
        let b = transformed_projection(&f, n, n_trunc, &sp)?;
        if a.approximant == b.approximant && a.residual_sq == b.residual_sq {
            agree += 1;
        }
    }
    Ok(Outcome {
        id: 6,
        name: "solver-equivalence",
        pass: agree == instances,
        detail: format!("{agree}/{instances} random exact instances agree"),
    })
}

fn quadrature_family(spec: &MeasureSpec, n_max: usize) -> Result<bool> {
    let s = moments(spec, 2 * n_max + 1)?;
    let rc = chebyshev_recurrence(&s, n_max + 1)?;
    let tol = float_tol(128);
    let mut prev: Option<Vec<Scalar>> = None;
    let mut ok = true;
    for n in 1..=n_max {
        let rule = gauss_rule(&rc, n, BITS)?;
        ok &= rule.masses.iter().all(Scalar::is_positive);
        ok &= rule.mass_sum().rel_diff(s.get(0), BITS) < tol;
        ok &= rule.exactness_defect(&s, BITS)? < tol;
        if spec.supported_on_half_line() {
            ok &= rule.nodes.iter().all(Scalar::is_positive);
        }
        if let Some(p) = &prev {
            ok &= interlacing_check(p, &rule.nodes, BITS).holds;
        }
        prev = Some(rule.nodes);
    }
    Ok(ok)
}

fn c7() -> Result<Outcome> {
    let atoms = MeasureSpec::discrete(
        (1..=24).map(|k| Scalar::ratio(k, 6)).collect(),
        (1..=24).map(|k| Scalar::ratio(1 + k % 5, 24)).collect(),
    )?;
    let families = [
        MeasureSpec::Laguerre,
        MeasureSpec::UniformUnit,
        MeasureSpec::lognormal(Scalar::ratio(1, 2))?,
        atoms,
    ];
    let mut pass = true;
    let mut names = Vec::new();
    for f in &families {
        pass &= quadrature_family(f, 20)?;
        names.push(f.family());
    }
    Ok(Outcome { id: 7, name: "quadrature-battery", pass, detail: format!("{} n<=20", names.join("/")) })
}

fn c8(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut pass = true;
    let trials = 20;
    for _ in 0..trials {
        let m = rng.gen_range(2..=6);
        let spec = random_atoms(rng, m, None);
        let basis = basis_from_moments(&moments(&spec, 2 * m - 1)?, m)?;
        let (points, weights) = spec.atoms().unwrap();
        for (x, w) in points.iter().zip(weights) {
            pass &= point_mass_estimate(&basis, x, m - 1)? == *w;
        }
        let mut x = Scalar::ratio(rng.gen_range(0..64), 8) + Scalar::ratio(1, 16);
        while points.contains(&x) {
            x = &x + &Scalar::ratio(1, 3);
        }
        let est = point_mass_estimate(&basis, &x, m - 1)?;
        let ideal = IdealSpec::single_root(ComplexScalar::real(x.clone()));
        let dist = ideal_distance(&TargetFunction::one(), &ideal, m - 1, &exact(&spec))?;
        pass &= est == dist.residual_sq && est.is_positive();
    }
    Ok(Outcome { id: 8, name: "parseval-mass-recovery", pass, detail: format!("{trials} random measures <=6 atoms") })
}

fn c9(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let z = ComplexScalar::i();
    let curve = riesz_ideal_check(&exact(&MeasureSpec::UniformUnit), &z, 1..=30)?;
    let threshold = Scalar::parse_exact(RIESZ_THRESHOLD)?;
    let mut pass = curve.windows(2).all(|w| w[1].1 < w[0].1) && curve.last().unwrap().1 < threshold;
    let mut short_positive = true;
    for m in 2..=6 {
        let spec = random_atoms(rng, m, None);
        let c = riesz_ideal_check(&exact(&spec), &z, 1..=m)?;
        // multiplier degree m - 1: m functions (x - z) x^j span all functions on m atoms
        pass &= c[m - 1].1.is_zero();
        short_positive &= c[m - 2].1.is_positive();
    }
    Ok(Outcome {
        id: 9,
        name: "riesz-ideal-smoke",
        pass,
        detail: format!(
            "uniform z=i N=30 residual {}; atoms: zero at multiplier degree m-1{}",
            curve.last().unwrap().1.to_decimal(6),
            if short_positive { ", positive one step earlier" } else { "" }
        ),
    })
}

fn c10() -> Result<Outcome> {
    let rule = ClassificationRule::for_precision(BITS);
    let z = ComplexScalar::i();
    let probe = |spec: &MeasureSpec| -> Result<_> {
        let b = basis_from_moments(&moments(spec, 121)?, 61)?;
        determinacy_probe(&b, &z, 60, rule)
    };
    let lag = probe(&MeasureSpec::Laguerre)?;
    let lag_ok = lag.curve.windows(2).all(|w| w[1] > w[0]) && lag.class == GrowthClass::DivergingLooking;

    let ln = probe(&MeasureSpec::lognormal(Scalar::ratio(1, 2))?)?;
    let target = two_pow_neg(64);
    let incs = ln.increments();
    let first_below = incs.iter().position(|d| *d < target).map(|i| i + 1);
    let ln_ok = first_below.is_some_and(|n| n < 60);
    let labels = lag.class.label().contains("heuristic") && ln.class.label().contains("heuristic");
    Ok(Outcome {
        id: 10,
        name: "determinacy-probe",
        pass: lag_ok && ln_ok && labels,
        detail: format!(
            "laguerre {}; lognormal {}, increment at N=60 {} vs 2^-64 {}",
            lag.class.label(),
            ln.class.label(),
            incs.last().unwrap().to_decimal(4),
            match first_below {
                Some(n) => format!("first below at N={n}"),
                None => "never below through N=60".into(),
            }
        ),
    })
}

/// Runs every criterion in order. A criterion that errors counts as failed.
pub fn run_all() -> Vec<(Outcome, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::new();
    let mut timed = |id: u32, name: &'static str, r: &mut dyn FnMut() -> Result<Outcome>| {
        let t = Instant::now();
        let o = r().unwrap_or_else(|e| Outcome { id, name, pass: false, detail: format!("error {}: {e}", e.code()) });
        out.push((o, t.elapsed().as_secs_f64()));
    };
    timed(1, "sw-ratio-reproduction", &mut c1);
    timed(2, "laguerre-ratio-decay", &mut c2);
    timed(3, "christoffel-duality", &mut || c3(&mut rng));
    timed(4, "density-contrast", &mut c4);
    timed(5, "atom-at-zero-obstruction", &mut || c5(&mut rng));
    timed(6, "solver-equivalence", &mut || c6(&mut rng));
    timed(7, "quadrature-battery", &mut c7);
    timed(8, "parseval-mass-recovery", &mut || c8(&mut rng));
    timed(9, "riesz-ideal-smoke", &mut || c9(&mut rng));
    timed(10, "determinacy-probe", &mut c10);
    out
}
