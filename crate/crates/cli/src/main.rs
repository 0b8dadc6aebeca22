//! `rotelast`: command-line front end.
//!
//! Every command reads a flat config (`--config`), applies `--set key=value`
//! overrides, runs, and writes a JSON report. Exit status is 0 when all checks
//! pass, 1 when a check fails and 2 on invalid input.

mod commands;
mod config;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use error::CliError;

pub const THREADS_ENV: &str = "ROTELAST_THREADS";

#[derive(Parser)]
#[command(name = "rotelast", version, about = "Rotational elasticity toolkit")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` config file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a config entry, e.g. `--set p0=2`
    #[arg(long = "set", short = 's', global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Input field file (same as `--set input=...`)
    #[arg(long, short = 'i', global = true)]
    input: Option<PathBuf>,
    /// Report file (same as `--set output=...`)
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    /// Worker threads; defaults to $ROTELAST_THREADS, then to the core count
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// List config keys and exit
    #[arg(long, global = true)]
    list_keys: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Spinor field <-> coframe field with density
    Convert,
    /// Irreducible pieces of the dislocation density tensor
    Decompose,
    /// Kinetic and potential energy per time slice
    Energy,
    /// Lagrangian density and action
    Lagrangian,
    #[command(subcommand)]
    Planewave(PlaneWaveCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
    #[command(subcommand)]
    Weyl(WeylCmd),
    #[command(subcommand)]
    Sweep(SweepCmd),
}

#[derive(Subcommand)]
enum PlaneWaveCmd {
    /// All plane-wave solutions for given moduli and frequency
    Solve,
    /// Residual and derived quantities of one plane wave
    Check,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// e^{ip·x}F is constant for plane waves
    Lemma1,
    /// that constant equals the reduced residual
    Lemma2,
    /// residual vs finite-difference action gradient
    Eulerlagrange,
}

#[derive(Subcommand)]
enum WeylCmd {
    /// Weyl residuals of a field
    Check,
    /// Plane-wave zero sets of a purely axial material vs the Weyl equation
    Theorem2,
    /// Weyl superposition as an elastic solution
    Theorem3,
}

#[derive(Subcommand)]
enum SweepCmd {
    /// Wave speeds along a line in moduli space
    Speeds,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Convert => "convert",
            Command::Decompose => "decompose",
            Command::Energy => "energy",
            Command::Lagrangian => "lagrangian",
            Command::Planewave(PlaneWaveCmd::Solve) => "planewave solve",
            Command::Planewave(PlaneWaveCmd::Check) => "planewave check",
            Command::Verify(VerifyCmd::Lemma1) => "verify lemma1",
            Command::Verify(VerifyCmd::Lemma2) => "verify lemma2",
            Command::Verify(VerifyCmd::Eulerlagrange) => "verify eulerlagrange",
            Command::Weyl(WeylCmd::Check) => "weyl check",
            Command::Weyl(WeylCmd::Theorem2) => "weyl theorem2",
            Command::Weyl(WeylCmd::Theorem3) => "weyl theorem3",
            Command::Sweep(SweepCmd::Speeds) => "sweep speeds",
        }
    }

    fn run(&self, cfg: &RunConfig) -> Result<report::Builder, CliError> {
        match self {
            Command::Convert => commands::convert(cfg),
            Command::Decompose => commands::decompose_cmd(cfg),
            Command::Energy => commands::energy(cfg),
            Command::Lagrangian => commands::lagrangian(cfg),
            Command::Planewave(PlaneWaveCmd::Solve) => commands::planewave_solve(cfg),
            Command::Planewave(PlaneWaveCmd::Check) => commands::planewave_check(cfg),
            Command::Verify(VerifyCmd::Lemma1) => commands::verify_lemma(cfg, false),
            Command::Verify(VerifyCmd::Lemma2) => commands::verify_lemma(cfg, true),
            Command::Verify(VerifyCmd::Eulerlagrange) => commands::verify_euler_lagrange(cfg),
            Command::Weyl(WeylCmd::Check) => commands::weyl_check(cfg),
            Command::Weyl(WeylCmd::Theorem2) => commands::weyl_theorem2(cfg),
            Command::Weyl(WeylCmd::Theorem3) => commands::weyl_theorem3(cfg),
            Command::Sweep(SweepCmd::Speeds) => commands::sweep_speeds(cfg),
        }
    }
}

fn build_config(c: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    for entry in &c.set {
        cfg.set(entry)?;
    }
    if let Some(p) = &c.input {
        cfg.insert("input", p.display().to_string());
    }
    if let Some(p) = &c.output {
        cfg.insert("output", p.display().to_string());
    }
    Ok(cfg)
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse().map_err(|_| CliError::Config(format!("{THREADS_ENV}={v:?} is not a count")))?),
            Err(_) => None,
        },
    };
    match n {
        Some(0) => Err(CliError::Config("thread count must be positive".into())),
        n => Ok(n),
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    if let Some(n) = thread_count(cli.common.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let cfg = build_config(&cli.common)?;
    let start = Instant::now();
    let builder = cli.command.run(&cfg)?;
    let report = builder.finish(cli.command.name(), &cfg, start.elapsed().as_secs_f64());
    report.write(cfg.path("output").as_deref())?;
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.common.list_keys {
        for (k, d) in config::KEYS {
            println!("{k:<14} {d}");
        }
        return ExitCode::SUCCESS;
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
