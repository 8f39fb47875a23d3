//! `lieflag`: check, classify, and compute curvature for left-invariant
//! metrics described in a JSON config.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Failure;

#[derive(Parser)]
#[command(name = "lieflag", version, about = "Left-invariant Riemannian and (alpha, beta) geometry on Lie groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the algebra, metric, drift and tag.
    Check(Common),
    /// Berwald / Douglas verdict with witnesses.
    Classify(Common),
    /// Flag curvature of every configured flag.
    Curvature(CurvatureArgs),
    /// Sign spectrum of the flag curvature over random flags.
    Scan(ScanArgs),
}

#[derive(Args)]
struct Common {
    /// Path to a `lieflag/1` JSON config.
    config: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum EngineSelection {
    All,
    Generic,
    Closed,
    Scaling,
}

#[derive(Args)]
struct CurvatureArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value = "all")]
    engine: EngineSelection,
    /// Long-format CSV: flag_index, engine, value.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    common: Common,
    /// Overrides `scan.samples` from the config.
    #[arg(long)]
    samples: Option<usize>,
    /// Overrides `scan.seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// One row per sample: index, y, v, K_F, K_g.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Allow groups that are not non-commutative nilpotent.
    #[arg(long)]
    force: bool,
}

fn tolerance() -> Result<f64, Failure> {
    match std::env::var("LIEFLAG_TOL") {
        Err(_) => Ok(lieflag_core::RESIDUAL_TOL),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(Failure::Parse(format!("LIEFLAG_TOL: expected a positive number, got {s:?}"))),
        },
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let tol = tolerance()?;
    match cli.command {
        Command::Check(c) => {
            let (report, ok) = commands::check(&commands::load(&c.config)?, tol);
            commands::emit(&report, c.json.as_deref())?;
            Ok(ok)
        }
        Command::Classify(c) => {
            let report = commands::classify(&commands::load(&c.config)?, tol)?;
            commands::emit(&report, c.json.as_deref())?;
            Ok(true)
        }
        Command::Curvature(a) => {
            let cfg = commands::load(&a.common.config)?;
            let report = commands::curvature(&cfg, a.engine)?;
            if let Some(path) = &a.csv {
                commands::write_curvature_csv(&report, path)?;
            }
            commands::emit(&report, a.common.json.as_deref())?;
            Ok(true)
        }
        Command::Scan(a) => {
            let cfg = commands::load(&a.common.config)?;
            let (report, samples) = commands::scan(&cfg, a.samples, a.seed, a.force)?;
            if let Some(path) = &a.csv {
                commands::write_scan_csv(&samples, path)?;
            }
            commands::emit(&report, a.common.json.as_deref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("lieflag: {f}");
            ExitCode::from(f.code())
        }
    }
}
