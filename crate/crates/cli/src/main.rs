mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{Map, Value};

use config::{ConfigDoc, ConfigError, Format};
use output::Table;

#[derive(Parser, Debug)]
#[command(name = "unruh-kinetics", version)]
#[command(about = "Thermal kernels, populations and energy rates of accelerated two-level detectors")]
#[command(after_help = "Any config field can be overridden with a dotted flag, e.g. \
--detector.omega0 2.0 --thermal.beta inf --trajectory.alpha 0.5")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate the thermal two-point function g over u and the swept alpha or beta
    Kernel,
    /// Integrate the population rate equations next to the closed form
    Populations,
    /// Fermi-Dirac steady state and detailed-balance ratio
    Steady,
    /// Vacuum-fluctuation and radiation-reaction energy rates
    Rates {
        /// Operator ordering parameter
        #[arg(long)]
        lambda: Option<f64>,
        /// Derivative coupling order
        #[arg(long)]
        order: Option<u32>,
        /// Atom state: plus, minus, or a value of <R3> in [-0.5, 0.5]
        #[arg(long, allow_hyphen_values = true)]
        atom: Option<String>,
        /// Also compute the field-side rates numerically
        #[arg(long)]
        field: bool,
    },
    /// Detector response over a grid of gaps
    Response,
    /// Fermion-bath rates and population evolution
    Fermion {
        /// JSON array of {"omega": f, "g": f}
        #[arg(long)]
        spectrum: Option<PathBuf>,
    },
    /// Evaluate a target over the configured sweep grid
    Sweep,
    /// Run the oracle and invariant suite
    Verify,
}

#[derive(Debug, thiserror::Error)]
#[error("{failed} verification check(s) failed")]
struct VerifyFailed {
    failed: usize,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<unruh_kinetics::Error>() {
            return match e {
                unruh_kinetics::Error::Domain(_) | unruh_kinetics::Error::SingularInput(_) => 1,
                unruh_kinetics::Error::NonConvergence { .. } | unruh_kinetics::Error::StepSize { .. } => 2,
            };
        }
        if cause.is::<ConfigError>() {
            return 1;
        }
        if cause.is::<VerifyFailed>() {
            return 2;
        }
        if cause.is::<std::io::Error>() {
            return 3;
        }
    }
    1
}

fn atom_r3(s: &str) -> Result<f64> {
    match s {
        "plus" | "excited" => Ok(0.5),
        "minus" | "ground" => Ok(-0.5),
        other => other
            .parse()
            .map_err(|_| ConfigError(format!("atom must be plus, minus or a number, got {other:?}")).into()),
    }
}

/// Single-row tables render as a JSON object keyed by column.
fn record_json(t: &Table) -> String {
    let mut m = Map::new();
    for (k, v) in t.columns.iter().zip(&t.rows[0]) {
        m.insert(k.clone(), v.clone());
    }
    serde_json::to_string_pretty(&Value::Object(m)).expect("JSON values always serialize") + "\n"
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("UNRUH_KINETICS_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| ConfigError(format!("UNRUH_KINETICS_THREADS must be a positive integer, got {v:?}")))?;
        b = b.num_threads(n.max(1));
    }
    b.build().context("building thread pool")
}

fn run(cli: Cli, overrides: Vec<(String, Value)>) -> Result<()> {
    let mut doc = ConfigDoc::load(cli.config.as_deref())?;
    for (k, v) in overrides {
        doc.set(&k, v)?;
    }
    if let Command::Rates { lambda, order, atom, .. } = &cli.command {
        if let Some(l) = lambda {
            doc.set("rates.lambda", output::num(*l))?;
        }
        if let Some(n) = order {
            doc.set("rates.n", Value::from(*n))?;
        }
        if let Some(a) = atom {
            doc.set("rates.r3", output::num(atom_r3(a)?))?;
        }
    }
    let cfg = doc.parse()?;
    let format = cli.format.unwrap_or(cfg.output.format);
    let path = cli.out.clone().or_else(|| cfg.output.path.clone());
    let pool = thread_pool()?;

    let table_text = |t: &Table| output::render(t, format);
    let record_text = |t: &Table| -> Result<String> {
        match format {
            Format::Csv => Ok(output::to_csv(t)),
            Format::Json => Ok(record_json(t)),
        }
    };

    let mut failure = None;
    let text = pool.install(|| -> Result<String> {
        match &cli.command {
            Command::Kernel => {
                let (t, failed) = commands::kernel(&doc, &cfg)?;
                if failed > 0 {
                    log::warn!("{failed} kernel row(s) could not be evaluated and were written as NaN");
                }
                table_text(&t)
            }
            Command::Populations => table_text(&commands::populations(&cfg)?),
            Command::Steady => record_text(&commands::steady(&cfg)?),
            Command::Rates { field, .. } => {
                let mut cfg = cfg.clone();
                cfg.rates.field |= *field;
                record_text(&commands::rates(&cfg)?)
            }
            Command::Response => table_text(&commands::response(&cfg)?),
            Command::Fermion { spectrum } => table_text(&commands::fermion(&cfg, spectrum.as_deref())?),
            Command::Sweep => table_text(&commands::sweep(&doc, &cfg)?),
            Command::Verify => {
                let (t, report) = commands::verify(&cfg);
                let failed = report.checks.iter().filter(|c| !c.passed).count();
                for c in report.checks.iter().filter(|c| !c.passed) {
                    log::warn!(
                        "check {} failed: measured {:e}, tolerance {:e}{}",
                        c.name,
                        c.measured,
                        c.tolerance,
                        c.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default()
                    );
                }
                if failed > 0 {
                    failure = Some(VerifyFailed { failed });
                }
                match format {
                    Format::Csv => Ok(output::to_csv(&t)),
                    Format::Json => Ok(serde_json::to_string_pretty(&report)? + "\n"),
                }
            }
        }
    })?;
    output::write(&text, path.as_deref())?;
    match failure {
        Some(f) => Err(f.into()),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args: Vec<String> = std::env::args().collect();
    let (args, overrides) = match config::split_overrides(args) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli, overrides) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
