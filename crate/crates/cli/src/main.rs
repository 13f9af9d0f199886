//! `pla-sim`: scenario-driven frontend for the multiboson PLA toolkit.
//!
//! Reads a JSON scenario config, builds the requested model, runs the
//! selected verification and dynamics tasks, and writes CSV/JSON
//! artifacts plus a top-level `summary.json`. Exit status: 0 when every
//! check passes, 1 on a failed check or runtime error, 2 on a config
//! parse error, 3 on a validation error.

mod artifacts;
mod config;
mod tasks;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::ScenarioConfig;

#[derive(Parser)]
#[command(name = "pla-sim", version, about = "Polynomial Lie algebras of multiboson models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config and write artifacts.
    Run {
        /// Path to the JSON scenario config.
        config: PathBuf,
        /// Output directory (overrides the config's `output_dir`).
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Worker threads for block-level parallelism
        /// (falls back to the PLA_SIM_THREADS environment variable).
        #[arg(long)]
        threads: Option<usize>,
        /// Print task progress to stderr.
        #[arg(long)]
        verbose: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            output_dir,
            threads,
            verbose,
        } => run(config, output_dir, threads, verbose),
    }
}

fn run(
    config_path: PathBuf,
    output_dir: Option<PathBuf>,
    threads: Option<usize>,
    verbose: bool,
) -> ExitCode {
    let text = match std::fs::read_to_string(&config_path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read config {}: {e}", config_path.display());
            return ExitCode::from(2);
        }
    };
    let config: ScenarioConfig = match serde_json::from_str(&text) {
        Ok(config) => config,
        Err(e) => {
            eprintln!(
                "error: config parse failure at line {}, column {}: {e}",
                e.line(),
                e.column()
            );
            return ExitCode::from(2);
        }
    };
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(3);
    }
    // Hamiltonian sections are validated eagerly so malformed parameters
    // exit with status 3 before any artifact is written.
    let early = match config.model {
        config::Model::Mps => config
            .mps_hamiltonian(config.n.unwrap(), config.s.unwrap())
            .map(|_| ()),
        config::Model::Polarization => config
            .polarization_hamiltonian(config.n_spatial.unwrap())
            .map(|_| ()),
    };
    if let Err(e) = early {
        eprintln!("error: {e}");
        return ExitCode::from(3);
    }

    let threads = threads.or_else(|| {
        std::env::var("PLA_SIM_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        // A second build_global in the same process is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }

    let out_dir = output_dir
        .or_else(|| config.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    if let Err(e) = std::fs::create_dir_all(&out_dir) {
        eprintln!("error: cannot create output directory {}: {e}", out_dir.display());
        return ExitCode::from(1);
    }

    let summary = match tasks::run_scenario(&config, &out_dir, verbose) {
        Ok(summary) => summary,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = artifacts::write_json(&out_dir.join("summary.json"), &summary) {
        eprintln!("error: cannot write summary.json: {e}");
        return ExitCode::from(1);
    }

    let failed: Vec<&artifacts::SummaryEntry> = summary.iter().filter(|s| !s.pass).collect();
    if verbose || !failed.is_empty() {
        for s in &summary {
            eprintln!(
                "[{}] {} :: {} (residual {:.3e}, tolerance {:.3e})",
                if s.pass { "pass" } else { "FAIL" },
                s.task,
                s.check,
                s.residual,
                s.tolerance
            );
        }
    }
    if let Some(first) = failed.first() {
        eprintln!(
            "error: check failed: {} :: {} (residual {:.3e} > tolerance {:.3e})",
            first.task, first.check, first.residual, first.tolerance
        );
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
