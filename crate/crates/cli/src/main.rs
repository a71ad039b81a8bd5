//! `toric`: file-based front end to toric-core.
//!
//! Exit codes: 0 on success, 1 on invalid input (missing file, parse error,
//! domain error), 2 on usage errors.

mod commands;
mod input;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use commands::Report;

#[derive(Parser)]
#[command(name = "toric", version, about = "Cox quotients, Δ-collections and GLSM phases of toric varieties")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a fan; report smoothness, completeness and the nef proxy.
    FanCheck {
        /// Fan JSON file or built-in name (P1..P8, P1xP1, F0..F8).
        fan: String,
    },
    /// Charge matrix, irrelevant ideal and primitive collections.
    Cox { fan: String },
    /// Dimensions of Y_d, G and W_d, optionally with a seeded sample.
    ModuliDim {
        fan: String,
        /// One degree per ray, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        degree: Vec<i64>,
        /// Draw a collection outside F_d from this seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Coefficient bound for the sample.
        #[arg(long, default_value_t = 10, requires = "seed")]
        bound: i64,
    },
    /// Nonvanishing, nondegeneracy and base divisor of a collection.
    DeltaCheck { collection: PathBuf },
    /// Apply the collapsing map to genus-0 stable-map data.
    Collapse { stable_map: PathBuf },
    /// Solve the D-term equations by damped Newton.
    GlsmSolve {
        problem: PathBuf,
        #[arg(long, default_value_t = toric_core::glsm::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = toric_core::glsm::DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
    /// Minimal unstable coordinate sets for the problem's FI parameters.
    GlsmPhase { problem: PathBuf },
}

fn run(cli: &Cli) -> Result<()> {
    let report: Report = match &cli.command {
        Command::FanCheck { fan } => commands::fan_check(fan)?,
        Command::Cox { fan } => commands::cox(fan)?,
        Command::ModuliDim { fan, degree, seed, bound } => {
            commands::moduli_dim(fan, degree, seed.map(|s| (s, *bound)))?
        }
        Command::DeltaCheck { collection } => commands::delta_check(collection)?,
        Command::Collapse { stable_map } => commands::collapse_cmd(stable_map)?,
        Command::GlsmSolve { problem, tol, max_iter } => commands::glsm_solve(problem, *tol, *max_iter)?,
        Command::GlsmPhase { problem } => commands::glsm_phase(problem)?,
    };
    let body = match cli.format {
        // serde_json's map is ordered, so keys come out sorted
        Format::Json => serde_json::to_string_pretty(&report.json)? + "\n",
        Format::Text => report.text,
    };
    match &cli.output {
        Some(path) => fs::write(path, body).with_context(|| format!("{}: cannot write output", path.display()))?,
        None => print!("{body}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
