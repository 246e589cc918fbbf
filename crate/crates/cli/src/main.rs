mod commands;
mod config;
mod error;
mod record;
mod suite;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{
    build_measure, parse_atoms_arg, parse_pair, resolve_path, split_list, ExperimentConfig,
    FileConfig, Format, MeasureSection, Params, DEFAULT_PRECISION,
};
use error::CliError;
use record::{Provenance, Record, RecordSet, Value};

#[derive(Parser, Debug)]
#[command(name = "momentlab", version, about = "Moment-sequence experiments: orthogonal polynomials, Gauss rules, ideal distances")]
struct Cli {
    /// Working precision in bits for the approximate path (and for irrational
    /// quantities on the exact path).
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Run in exact rational arithmetic.
    #[arg(long, global = true)]
    exact: bool,
    /// TOML file with [measure], [run] and [params] sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    measure: MeasureArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct MeasureArgs {
    /// laguerre | uniform | lognormal | atoms | raw
    #[arg(long, global = true)]
    measure: Option<String>,
    /// Lognormal parameter, e.g. 1/2.
    #[arg(long, global = true)]
    q: Option<String>,
    /// Atoms as point@weight;point@weight.
    #[arg(long, global = true)]
    atoms: Option<String>,
    /// Raw moments s_0;s_1;...
    #[arg(long = "raw-moments", global = true)]
    raw_moments: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moments s_0..s_M.
    Moments {
        #[arg(long)]
        max_order: Option<usize>,
    },
    /// Recurrence coefficients a_k, b_k for k < n.
    Recur {
        #[arg(long)]
        n: Option<usize>,
    },
    /// Zeros of p_n.
    Zeros {
        #[arg(long)]
        n: Option<usize>,
    },
    /// n-point Gauss rule.
    Quad {
        #[arg(long)]
        n: Option<usize>,
    },
    /// Coefficient ratios gamma_{n,k}/gamma_{n,k+1}.
    RatioTable {
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Kernel sums K_N(x) and point-mass estimates 1/K_N(x).
    Mass {
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Residuals of a target against a monomial or single-root ideal.
    Density {
        /// Ascending coefficients, e.g. "1;0;-1/2".
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        /// Values on the atoms, in atom order.
        #[arg(long, allow_hyphen_values = true)]
        f_atoms: Option<String>,
        /// Lowest monomial degree of the ideal.
        #[arg(long)]
        n: Option<usize>,
        /// Root z of the ideal (x - z) C[x], as re,im.
        #[arg(long, allow_hyphen_values = true)]
        root: Option<String>,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Kernel growth at a non-real point, optionally for x^k dmu, k <= k_max.
    Probe {
        /// re,im (default 0,1).
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        k_max: Option<usize>,
        /// Classification threshold 2^-t on relative increments.
        #[arg(long)]
        threshold_bits: Option<u32>,
    },
    /// Runs the acceptance battery and writes a manifest.
    Suite,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Moments { .. } => "moments",
            Command::Recur { .. } => "recur",
            Command::Zeros { .. } => "zeros",
            Command::Quad { .. } => "quad",
            Command::RatioTable { .. } => "ratio-table",
            Command::Mass { .. } => "mass",
            Command::Density { .. } => "density",
            Command::Probe { .. } => "probe",
            Command::Suite => "suite",
        }
    }

    fn params(&self) -> Result<Params, CliError> {
        let list = |s: &Option<String>| s.as_deref().map(split_list);
        let pair = |name: &str, s: &Option<String>| s.as_deref().map(|v| parse_pair(name, v)).transpose();
        Ok(match self {
            Command::Moments { max_order } => Params { max_order: *max_order, ..Default::default() },
            Command::Recur { n } | Command::Zeros { n } | Command::Quad { n } => {
                Params { n: *n, ..Default::default() }
            }
            Command::RatioTable { n_max, k_max } => {
                Params { n_max: *n_max, k_max: *k_max, ..Default::default() }
            }
            Command::Mass { x, n_max } => Params { x: x.clone(), n_max: *n_max, ..Default::default() },
            Command::Density { f, f_atoms, n, root, n_min, n_max } => Params {
                f: list(f),
                f_atoms: list(f_atoms),
                n: *n,
                root: pair("root", root)?,
                n_min: *n_min,
                n_max: *n_max,
                ..Default::default()
            },
            Command::Probe { z, n_max, k_max, threshold_bits } => Params {
                z: pair("z", z)?,
                n_max: *n_max,
                k_max: *k_max,
                threshold_bits: *threshold_bits,
                ..Default::default()
            },
            Command::Suite => Params::default(),
        })
    }
}

fn measure_section(args: &MeasureArgs, file: MeasureSection) -> Result<MeasureSection, CliError> {
    let atoms = args.atoms.as_deref().map(parse_atoms_arg).transpose()?;
    Ok(MeasureSection {
        family: args.measure.clone().or(file.family),
        q: args.q.clone().or(file.q),
        atoms: atoms.or(file.atoms),
        moments: args.raw_moments.as_deref().map(split_list).or(file.moments),
    })
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let precision = cli.precision.or(file.run.precision).unwrap_or(DEFAULT_PRECISION);
    let exact = cli.exact || file.run.exact.unwrap_or(false);
    let path = resolve_path(exact, precision)?;
    let measure = if matches!(cli.command, Command::Suite) {
        momentlab::MeasureSpec::Laguerre
    } else {
        build_measure(&measure_section(&cli.measure, file.measure)?)?
    };
    Ok(ExperimentConfig {
        measure,
        path,
        precision,
        format: cli.format.or(file.run.format).unwrap_or(Format::Csv),
        out: cli.out.clone().or(file.run.out),
        params: cli.command.params()?.or(file.params),
    })
}

fn run_suite(cfg: &ExperimentConfig) -> Result<(Vec<Record>, Provenance), CliError> {
    let results = suite::run_all();
    let mut set = RecordSet::new(
        "suite",
        vec![("seed".into(), suite::SEED.to_string()), ("precision".into(), suite::BITS.to_string())],
        true,
        cfg.digits(),
    );
    let mut prov = Provenance::default();
    for (o, secs) in &results {
        eprintln!("{}  ({secs:.2}s)", o.line());
        set.push(
            vec![("criterion", o.id.to_string()), ("name", o.name.to_string())],
            vec![("status", Value::text(if o.pass { "PASS" } else { "FAIL" })), ("detail", Value::text(o.detail.clone()))],
        );
        prov.check(&format!("criterion-{}", o.id), o.pass);
    }
    Ok((set.finish(&prov), prov))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = resolve(cli)?;
    let (records, prov) = match &cli.command {
        Command::Moments { .. } => commands::moments(&cfg)?,
        Command::Recur { .. } => commands::recur(&cfg)?,
        Command::Zeros { .. } => commands::zeros_cmd(&cfg)?,
        Command::Quad { .. } => commands::quad(&cfg)?,
        Command::RatioTable { .. } => commands::ratio_table_cmd(&cfg)?,
        Command::Mass { .. } => commands::mass(&cfg)?,
        Command::Density { .. } => commands::density(&cfg)?,
        Command::Probe { .. } => commands::probe(&cfg)?,
        Command::Suite => run_suite(&cfg)?,
    };
    match &cfg.out {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            record::write_records(&records, cfg.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            record::write_records(&records, cfg.format, stdout.lock())?;
        }
    }
    let failed = prov.failures();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(format!("{}: invariant check failed: {}", cli.command.name(), failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
