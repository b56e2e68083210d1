#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use udwsim_cli::commands::{self, Outcome, SweepAxis, DEFAULT_TOLERANCE};
use udwsim_cli::{CliError, CliResult, Format, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "udwsim", version, about = "Detector response, heterodyne noise and witness spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Overrides `simulate.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Oracle agreement tolerance for `response`.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form responses and both numeric oracles over the grid.
    Response,
    /// Sum- and difference-port PSDs with the noise budget.
    Psd,
    /// PSD table plus band-minimum SNR and the SNR = 10 crossing.
    Snr,
    /// PSD table plus the witness peak.
    Witness,
    /// Monte-Carlo photocurrent records and Welch spectra against the model.
    Simulate,
    /// Cross-product sweep over delta, mu_sq and band.
    Sweep {
        /// `var=v1,v2,...` with var in {delta, mu_sq, band}; band values are `lo:hi`.
        #[arg(long = "sweep", required = true)]
        sweep: Vec<String>,
    },
    /// Derived physical parameters.
    Params,
}

fn run(cli: &Cli) -> CliResult<Option<String>> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.simulate.seed = seed;
        cfg.validate()?;
    }
    let tolerance = cli.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    if !(tolerance > 0.0) {
        return Err(CliError::Config("--tolerance must be positive".into()));
    }

    let Outcome { table, failure } = match &cli.command {
        Command::Response => commands::response(&cfg, tolerance)?,
        Command::Psd => commands::psd(&cfg)?,
        Command::Snr => commands::snr(&cfg)?,
        Command::Witness => commands::witness(&cfg)?,
        Command::Simulate => commands::simulate(&cfg)?,
        Command::Sweep { sweep } => {
            let axes = sweep.iter().map(|s| SweepAxis::parse(s)).collect::<CliResult<Vec<_>>>()?;
            commands::sweep(&cfg, &axes)?
        }
        Command::Params => commands::params(&cfg)?,
    };

    match &cli.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(&mut w, cli.format)?;
            w.flush()?;
        }
        None => table.write(io::stdout().lock(), cli.format)?,
    }
    Ok(failure)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(failure)) => {
            let e = CliError::Check(failure);
            eprintln!("udwsim: {e}");
            e.exit_code()
        }
        Err(e) => {
            eprintln!("udwsim: {e}");
            e.exit_code()
        }
    }
}
