//! One function per subcommand; each returns records plus the invariants it
//! re-checked along the way.

use momentlab::density::{
    christoffel_duality_check, density_index_probe, determinacy_probe, ideal_distance,
    residual_decay_curve, transformed_projection, ClassificationRule, DeterminacyProbe, L2Space,
    TargetFunction,
};
use momentlab::measures::{atom_mass, IdealSpec};
use momentlab::orthopoly::{
    basis_from_moments, chebyshev_recurrence, gauss_rule, interlacing_check, kernel_sum,
    point_mass_estimate, ratio_table, sw_ratio_closed_form, zeros,
};
use momentlab::precision::half_precision_tolerance;
use momentlab::{ComplexScalar, Error, MeasureSpec, Poly, Scalar};

use crate::config::{measure_args, ExperimentConfig};
use crate::error::CliError;
use crate::record::{Provenance, Record, RecordSet};

pub type Output = (Vec<Record>, Provenance);

fn space(cfg: &ExperimentConfig) -> Result<L2Space, CliError> {
    Ok(L2Space::new(&cfg.measure, cfg.path)?)
}

fn records(cfg: &ExperimentConfig, command: &str, extra: Vec<(&str, String)>) -> RecordSet {
    let mut base = measure_args(&cfg.measure);
    base.push(("path".into(), if cfg.path.is_exact() { "exact" } else { "approx" }.into()));
    base.push(("precision".into(), cfg.precision.to_string()));
    base.extend(extra.into_iter().map(|(k, v)| (k.to_string(), v)));
    RecordSet::new(command, base, cfg.path.is_exact(), cfg.digits())
}

/// Relative closeness used for run-time checks on the float path.
fn close(a: &Scalar, b: &Scalar, bits: u32) -> bool {
    if a.is_exact() && b.is_exact() {
        a == b
    } else {
        a.rel_diff(b, bits) < half_precision_tolerance(bits)
    }
}

pub fn moments(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let m = cfg.require("max_order", cfg.params.max_order)?;
    let s = space(cfg)?.moments(m)?;
    let mut set = records(cfg, "moments", vec![]);
    for (k, v) in s.as_slice().iter().enumerate() {
        let val = set.num(v);
        set.push(vec![("k", k.to_string())], vec![("s", val)]);
    }
    let mut prov = Provenance::default();
    prov.check("hankel-psd", s.check_positive_semidefinite().is_ok());
    Ok((set.finish(&prov), prov))
}

pub fn recur(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let n = cfg.require("n", cfg.params.n)?;
    if n == 0 {
        return Err(CliError::Config("recurrence depth n must be at least 1".into()));
    }
    let s = space(cfg)?.moments(2 * n - 1)?;
    let rc = chebyshev_recurrence(&s, n)?;
    let mut set = records(cfg, "recur", vec![]);
    for k in 0..n {
        // b_0 is s_0 by the usual convention
        let b = if k == 0 { rc.s0().clone() } else { rc.b(k).clone() };
        let vals = vec![("a", set.num(rc.a(k))), ("b", set.num(&b)), ("norm_sq", set.num(rc.norm_sq(k)))];
        set.push(vec![("k", k.to_string())], vals);
    }
    let mut prov = Provenance::default();
    let basis = basis_from_moments(&s, n)?;
    prov.check("orthonormality", basis.verify_orthonormal(&s, cfg.bits()).is_ok());
    Ok((set.finish(&prov), prov))
}

fn interlacing(
    prov: &mut Provenance,
    rc: &momentlab::orthopoly::RecurrenceCoeffs,
    n: usize,
    upper: &[Scalar],
    bits: u32,
) -> Result<(), CliError> {
    if n >= 2 {
        let lower = zeros(rc, n - 1, bits)?;
        prov.check("interlacing", interlacing_check(&lower, upper, bits).holds);
    } else {
        prov.skip("interlacing");
    }
    Ok(())
}

pub fn zeros_cmd(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let n = cfg.require("n", cfg.params.n)?;
    if n == 0 {
        return Err(CliError::Config("p_0 has no zeros; n must be at least 1".into()));
    }
    let s = space(cfg)?.moments(2 * n - 1)?;
    let rc = chebyshev_recurrence(&s, n)?;
    let x = zeros(&rc, n, cfg.bits())?;
    let mut set = records(cfg, "zeros", vec![("n", n.to_string())]);
    for (j, xj) in x.iter().enumerate() {
        let v = set.num(xj);
        set.push(vec![("j", j.to_string())], vec![("x", v)]);
    }
    let mut prov = Provenance::default();
    interlacing(&mut prov, &rc, n, &x, cfg.bits())?;
    if cfg.measure.supported_on_half_line() {
        prov.check("positive-zeros", x.iter().all(Scalar::is_positive));
    }
    Ok((set.finish(&prov), prov))
}

pub fn quad(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let n = cfg.require("n", cfg.params.n)?;
    if n == 0 {
        return Err(CliError::Config("a Gauss rule needs n >= 1".into()));
    }
    let s = space(cfg)?.moments(2 * n - 1)?;
    let rc = chebyshev_recurrence(&s, n)?;
    let rule = gauss_rule(&rc, n, cfg.bits())?;
    let mut set = records(cfg, "quad", vec![("n", n.to_string())]);
    for (j, (x, h)) in rule.nodes.iter().zip(&rule.masses).enumerate() {
        let vals = vec![("node", set.num(x)), ("mass", set.num(h))];
        set.push(vec![("j", j.to_string())], vals);
    }
    let mut prov = Provenance::default();
    prov.check("masses-positive", rule.masses.iter().all(Scalar::is_positive));
    prov.check("exactness", rule.verify(&s, cfg.bits()).is_ok());
    interlacing(&mut prov, &rc, n, &rule.nodes, cfg.bits())?;
    Ok((set.finish(&prov), prov))
}

pub fn ratio_table_cmd(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let n_max = cfg.require("n_max", cfg.params.n_max)?;
    let k_max = cfg.require("k_max", cfg.params.k_max)?;
    if k_max >= n_max {
        return Err(CliError::Config(format!("k_max = {k_max} must be below n_max = {n_max}")));
    }
    let s = space(cfg)?.moments(2 * n_max + 1)?;
    let table = ratio_table(&basis_from_moments(&s, n_max + 1)?, k_max)?;
    let q = match &cfg.measure {
        MeasureSpec::Lognormal { q } => Some(q.clone()),
        _ => None,
    };
    let mut set = records(cfg, "ratio-table", vec![("k_max", k_max.to_string())]);
    let mut dual_ok = true;
    for (n, k, r) in table.entries() {
        let mut vals = vec![("ratio", set.num(r))];
        if let Some(q) = &q {
            let closed = sw_ratio_closed_form(q, n, k)?;
            let diff = if r.is_exact() && closed.is_exact() {
                (r - &closed).abs()
            } else {
                Scalar::Approx(r.rel_diff(&closed, cfg.bits()))
            };
            dual_ok &= close(r, &closed, cfg.bits());
            vals.push(("closed_form", set.num(&closed)));
            vals.push(("difference", set.num(&diff)));
        }
        set.push(vec![("n", n.to_string()), ("k", k.to_string())], vals);
    }
    let mut prov = Provenance::default();
    if q.is_some() {
        prov.check("dual-construction", dual_ok);
    }
    Ok((set.finish(&prov), prov))
}

pub fn mass(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let n_max = cfg.require("n_max", cfg.params.n_max)?;
    let x = cfg.scalar("x", &cfg.params.x)?.unwrap_or_else(Scalar::zero);
    let s = space(cfg)?.moments(2 * n_max + 1)?;
    let basis = basis_from_moments(&s, n_max + 1)?;
    let mut set = records(cfg, "mass", vec![("x", x.to_string())]);
    let mut kernels = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let k = kernel_sum(&basis, &x, n)?;
        let est = point_mass_estimate(&basis, &x, n)?;
        let vals = vec![("kernel", set.num(&k)), ("mass_estimate", set.num(&est))];
        set.push(vec![("N", n.to_string())], vals);
        kernels.push((k, est));
    }
    let mut prov = Provenance::default();
    prov.check("kernel-nondecreasing", kernels.windows(2).all(|w| w[0].0 <= w[1].0));
    match cfg.measure.support_size() {
        Some(m) if n_max + 1 == m => {
            let truth = atom_mass(&cfg.measure, &x)?;
            let est = &kernels[n_max].1;
            let ok = if truth.is_zero() { est.is_positive() } else { close(est, &truth, cfg.bits()) };
            prov.check("full-basis-mass", ok);
        }
        _ => prov.skip("full-basis-mass"),
    }
    Ok((set.finish(&prov), prov))
}

fn target(cfg: &ExperimentConfig) -> Result<TargetFunction, CliError> {
    let parse = |v: &[String]| -> Result<Vec<Scalar>, CliError> {
        v.iter().map(|s| crate::config::parse_scalar("f", s)).collect()
    };
    match (&cfg.params.f, &cfg.params.f_atoms) {
        (Some(_), Some(_)) => Err(CliError::Config("give either `f` or `f_atoms`, not both".into())),
        (Some(c), None) => Ok(TargetFunction::Poly(Poly::new(parse(c)?))),
        (None, Some(v)) => Ok(TargetFunction::AtomValues(parse(v)?)),
        (None, None) => Ok(TargetFunction::one()),
    }
}

pub fn density(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let f = target(cfg)?;
    let ideal = match cfg.complex("root", &cfg.params.root)? {
        Some(z) => IdealSpec::single_root(z),
        None => IdealSpec::monomial(cfg.params.n.unwrap_or(1)),
    };
    let (lo, hi) = cfg.range(ideal.degree().max(1))?;
    let sp = space(cfg)?;
    let curve = residual_decay_curve(&f, &ideal, lo..=hi, &sp)?;
    let unit_target = f == TargetFunction::one() && ideal == IdealSpec::monomial(1);
    let duality = if unit_target { Some(christoffel_duality_check(&sp, lo..=hi)) } else { None };

    let mut set = records(cfg, "density", vec![("ideal", ideal.to_string()), ("f", describe(&f))]);
    for (i, (n, r)) in curve.iter().enumerate() {
        let mut vals = vec![("residual_sq", set.num(r))];
        if let Some(Ok(rep)) = &duality {
            vals.push(("kernel_at_zero", set.num(&rep.rows[i].kernel)));
            vals.push(("product", set.num(&rep.rows[i].product)));
        }
        set.push(vec![("N", n.to_string())], vals);
    }

    let mut prov = Provenance::default();
    let tol = Scalar::Approx(rug::Float::with_val(cfg.bits(), half_precision_tolerance(cfg.bits())));
    prov.check(
        "residual-nonincreasing",
        curve.windows(2).all(|w| if cfg.path.is_exact() { w[1].1 <= w[0].1 } else { w[1].1 <= &w[0].1 + &tol }),
    );
    match duality {
        Some(Ok(_)) => prov.check("christoffel-duality", true),
        Some(Err(Error::ArithmeticInvariant(_))) => prov.check("christoffel-duality", false),
        Some(Err(e)) => return Err(e.into()),
        None => prov.skip("christoffel-duality"),
    }
    let direct = ideal_distance(&f, &ideal, hi, &sp)?;
    prov.check("ideal-membership", direct.in_ideal(&ideal, cfg.bits())?);
    match ideal {
        IdealSpec::Monomial { n } => match transformed_projection(&f, n, hi, &sp) {
            Ok(t) => {
                let same_res = close(&t.residual_sq, &direct.residual_sq, cfg.bits())
                    || (&t.residual_sq - &direct.residual_sq).abs() < &tol * &direct.target_norm_sq;
                let same_poly = if cfg.path.is_exact() { t.approximant == direct.approximant } else { true };
                prov.check("solver-equivalence", same_res && same_poly);
            }
            Err(Error::Domain(_)) => prov.skip("solver-equivalence"),
            Err(e) => return Err(e.into()),
        },
        IdealSpec::RootSystem { .. } => prov.skip("solver-equivalence"),
    }
    Ok((set.finish(&prov), prov))
}

fn describe(f: &TargetFunction) -> String {
    match f {
        TargetFunction::Poly(p) => {
            let c: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
            if c.is_empty() {
                "0".into()
            } else {
                c.join(";")
            }
        }
        TargetFunction::AtomValues(v) => {
            let c: Vec<String> = v.iter().map(|c| c.to_string()).collect();
            format!("atoms:{}", c.join(";"))
        }
    }
}

pub fn probe(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let n_max = cfg.require("n_max", cfg.params.n_max)?;
    let k_max = cfg.params.k_max.unwrap_or(0);
    let z = cfg.complex("z", &cfg.params.z)?.unwrap_or_else(ComplexScalar::i);
    let rule = match cfg.params.threshold_bits {
        Some(t) => ClassificationRule { threshold_bits: t },
        None => ClassificationRule::for_precision(cfg.bits()),
    };
    let sp = space(cfg)?;
    let rows: Vec<(usize, DeterminacyProbe, Vec<(usize, Scalar)>)> = if k_max == 0 {
        let basis = basis_from_moments(&sp.moments(2 * n_max + 1)?, n_max + 1)?;
        let p = determinacy_probe(&basis, &z, n_max, rule)?;
        let res = if n_max >= 1 {
            residual_decay_curve(&TargetFunction::one(), &IdealSpec::monomial(1), 1..=n_max, &sp)?
        } else {
            Vec::new()
        };
        vec![(0, p, res)]
    } else {
        density_index_probe(&sp, k_max, n_max, &z, rule)?
            .into_iter()
            .map(|r| (r.k, r.probe, r.residuals))
            .collect()
    };

    let mut set = records(
        cfg,
        "probe",
        vec![("z", z.to_string()), ("threshold_bits", rule.threshold_bits.to_string())],
    );
    let mut kernel_ok = true;
    let mut residual_ok = true;
    for (k, p, res) in &rows {
        kernel_ok &= p.curve.windows(2).all(|w| w[0] <= w[1]);
        residual_ok &= res.windows(2).all(|w| w[1].1 <= w[0].1 || !cfg.path.is_exact());
        for (n, kn) in p.curve.iter().enumerate() {
            let mut vals = vec![("kernel", set.num(kn))];
            let r = res.iter().find(|(m, _)| *m == n).map(|(_, r)| set.num(r));
            vals.push(("residual_sq", r.unwrap_or_else(|| crate::record::Value::text(""))));
            vals.push(("classification", crate::record::Value::text(p.class.label())));
            set.push(vec![("k", k.to_string()), ("N", n.to_string())], vals);
        }
    }
    let mut prov = Provenance::default();
    prov.check("kernel-nondecreasing", kernel_ok);
    if cfg.path.is_exact() {
        prov.check("residual-nonincreasing", residual_ok);
    }
    Ok((set.finish(&prov), prov))
}
