//! Experiment configuration: TOML file merged with command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use momentlab::{ComplexScalar, MeasureSpec, MomentSequence, NumericPath, Scalar};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Measure as written in a config file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSection {
    pub family: Option<String>,
    pub q: Option<String>,
    /// `[point, weight]` pairs.
    pub atoms: Option<Vec<[String; 2]>>,
    pub moments: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub precision: Option<u32>,
    pub exact: Option<bool>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

/// Command parameters; every command reads the subset it needs.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub max_order: Option<usize>,
    pub n: Option<usize>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub k_max: Option<usize>,
    pub x: Option<String>,
    /// `[re, im]`.
    pub z: Option<[String; 2]>,
    /// Ascending polynomial coefficients of the target.
    pub f: Option<Vec<String>>,
    /// Target values on the atoms.
    pub f_atoms: Option<Vec<String>>,
    /// `[re, im]` of a single root generating the ideal.
    pub root: Option<[String; 2]>,
    pub threshold_bits: Option<u32>,
}

impl Params {
    /// Fields set in `self` win over `other`.
    pub fn or(self, other: Params) -> Params {
        Params {
            max_order: self.max_order.or(other.max_order),
            n: self.n.or(other.n),
            n_min: self.n_min.or(other.n_min),
            n_max: self.n_max.or(other.n_max),
            k_max: self.k_max.or(other.k_max),
            x: self.x.or(other.x),
            z: self.z.or(other.z),
            f: self.f.or(other.f),
            f_atoms: self.f_atoms.or(other.f_atoms),
            root: self.root.or(other.root),
            threshold_bits: self.threshold_bits.or(other.threshold_bits),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub measure: MeasureSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub params: Params,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Fully resolved settings for one command run.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub measure: MeasureSpec,
    pub path: NumericPath,
    pub precision: u32,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub params: Params,
}

impl ExperimentConfig {
    pub fn bits(&self) -> u32 {
        self.precision
    }

    /// Decimal digits printed for a `P`-bit run: `ceil(P log10 2)`.
    pub fn digits(&self) -> usize {
        (f64::from(self.precision) * std::f64::consts::LOG10_2).ceil() as usize
    }

    pub fn require(&self, name: &str, v: Option<usize>) -> Result<usize, CliError> {
        v.ok_or_else(|| CliError::Config(format!("missing parameter `{name}`")))
    }

    /// `n_min..=n_max` with a default start, rejected when empty.
    pub fn range(&self, default_min: usize) -> Result<(usize, usize), CliError> {
        let hi = self.require("n_max", self.params.n_max)?;
        let lo = self.params.n_min.unwrap_or(default_min);
        if lo > hi {
            return Err(CliError::Config(format!("empty range n_min = {lo} > n_max = {hi}")));
        }
        Ok((lo, hi))
    }

    pub fn scalar(&self, name: &str, v: &Option<String>) -> Result<Option<Scalar>, CliError> {
        v.as_deref().map(|s| parse_scalar(name, s)).transpose()
    }

    pub fn complex(&self, name: &str, v: &Option<[String; 2]>) -> Result<Option<ComplexScalar>, CliError> {
        v.as_ref()
            .map(|[re, im]| Ok(ComplexScalar::new(parse_scalar(name, re)?, parse_scalar(name, im)?)))
            .transpose()
    }
}

pub fn parse_scalar(name: &str, s: &str) -> Result<Scalar, CliError> {
    Scalar::parse_exact(s).map_err(|_| CliError::Config(format!("`{name}`: cannot parse `{s}` as a number")))
}

fn parse_list(name: &str, items: &[String]) -> Result<Vec<Scalar>, CliError> {
    items.iter().map(|s| parse_scalar(name, s)).collect()
}

/// Builds the measure from a family name and its parameters.
pub fn build_measure(m: &MeasureSection) -> Result<MeasureSpec, CliError> {
    let family = m
        .family
        .as_deref()
        .ok_or_else(|| CliError::Config("no measure family given".into()))?;
    let spec = match family {
        "laguerre" => MeasureSpec::Laguerre,
        "uniform" => MeasureSpec::UniformUnit,
        "lognormal" => {
            let q = m.q.as_deref().ok_or_else(|| CliError::Config("lognormal needs `q`".into()))?;
            MeasureSpec::Lognormal { q: parse_scalar("q", q)? }
        }
        "atoms" => {
            let atoms = m
                .atoms
                .as_ref()
                .ok_or_else(|| CliError::Config("atoms family needs `atoms`".into()))?;
            let points = atoms.iter().map(|[p, _]| parse_scalar("atoms", p)).collect::<Result<_, _>>()?;
            let weights = atoms.iter().map(|[_, w]| parse_scalar("atoms", w)).collect::<Result<_, _>>()?;
            MeasureSpec::DiscreteAtoms { points, weights }
        }
        "raw" => {
            let s = m
                .moments
                .as_ref()
                .ok_or_else(|| CliError::Config("raw family needs `moments`".into()))?;
            let seq = MomentSequence::new(parse_list("moments", s)?)
                .map_err(|e| CliError::Config(e.to_string()))?;
            MeasureSpec::RawMoments(seq)
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown measure family `{other}` (laguerre, uniform, lognormal, atoms, raw)"
            )))
        }
    };
    spec.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(spec)
}

/// Inverse of [`build_measure`], used to make records re-runnable.
pub fn measure_args(spec: &MeasureSpec) -> Vec<(String, String)> {
    let mut out = vec![("measure".to_string(), spec.family().to_string())];
    match spec {
        MeasureSpec::Lognormal { q } => out.push(("q".into(), q.to_string())),
        MeasureSpec::DiscreteAtoms { points, weights } => {
            let atoms: Vec<String> = points.iter().zip(weights).map(|(p, w)| format!("{p}@{w}")).collect();
            out.push(("atoms".into(), atoms.join(";")));
        }
        MeasureSpec::RawMoments(s) => {
            let m: Vec<String> = s.as_slice().iter().map(|x| x.to_string()).collect();
            out.push(("moments".into(), m.join(";")));
        }
        MeasureSpec::Laguerre | MeasureSpec::UniformUnit => {}
    }
    out
}

/// `p@w;p@w;...` as used on the command line.
pub fn parse_atoms_arg(s: &str) -> Result<Vec<[String; 2]>, CliError> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (p, w) = t
                .split_once('@')
                .ok_or_else(|| CliError::Config(format!("atom `{t}` is not of the form point@weight")))?;
            Ok([p.trim().to_string(), w.trim().to_string()])
        })
        .collect()
}

/// `a;b;c` or `a,b,c`.
pub fn split_list(s: &str) -> Vec<String> {
    s.split([';', ','])
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect()
}

/// `re,im`.
pub fn parse_pair(name: &str, s: &str) -> Result<[String; 2], CliError> {
    match split_list(s).as_slice() {
        [re, im] => Ok([re.clone(), im.clone()]),
        _ => Err(CliError::Config(format!("`{name}` expects `re,im`, got `{s}`"))),
    }
}

pub const MIN_PRECISION: u32 = 64;
pub const DEFAULT_PRECISION: u32 = 256;

pub fn resolve_path(exact: bool, precision: u32) -> Result<NumericPath, CliError> {
    if precision < MIN_PRECISION {
        return Err(CliError::Config(format!(
            "precision {precision} is below the minimum of {MIN_PRECISION} bits"
        )));
    }
    Ok(if exact { NumericPath::Exact } else { NumericPath::approx(precision) })
}
