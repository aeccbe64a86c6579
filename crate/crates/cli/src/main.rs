//! `r13lab` command-line front end.
//!
//! Exit codes: 0 success, 2 configuration error, 3 inconsistent model data,
//! 4 solver or numerical-check failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use r13lab::app::{resolve_out_dir, run, OUT_DIR_ENV};
use r13lab::config::{Command, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "r13lab", version, about = "Linearized R13 equations with Onsager wall conditions")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Model file, or `bundled:<name>` (eta7, eta10, eta17, eta_inf, maxwell).
    #[arg(long, global = true)]
    model: Option<String>,

    /// Problem document (TOML); defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    out: Option<PathBuf>,

    /// Seed of every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for dense eigensolves; 1 keeps runs bit-reproducible.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Thermodynamic discriminants compared with the tabulated values.
    ValidateParams,
    /// Wall coefficients with positivity and consistency audits.
    DeriveBcs,
    /// Korn certificates and the conformal-Killing kernel.
    Korn,
    /// Steady slab solve.
    SolveSteady,
    /// Transient slab run from a seeded random state.
    SolveTransient,
    /// Self-convergence study on a mesh ladder.
    Converge,
}

impl From<&Cmd> for Command {
    fn from(c: &Cmd) -> Self {
        match c {
            Cmd::ValidateParams => Command::ValidateParams,
            Cmd::DeriveBcs => Command::DeriveBcs,
            Cmd::Korn => Command::Korn,
            Cmd::SolveSteady => Command::SolveSteady,
            Cmd::SolveTransient => Command::SolveTransient,
            Cmd::Converge => Command::Converge,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cfg = RunConfig {
        command: Command::from(&cli.command),
        model: cli.model,
        config: cli.config,
        out: resolve_out_dir(cli.out),
        seed: cli.seed,
        threads: cli.threads,
    };
    match run(&cfg) {
        Ok(summary) => {
            for line in &summary.lines {
                println!("{line}");
            }
            println!("outputs written to {}", summary.out_dir.display());
            match &summary.failure {
                None => ExitCode::SUCCESS,
                Some(e) => {
                    eprintln!("r13lab {}: {e}", cfg.command.name());
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
        Err(e) => {
            eprintln!("r13lab {}: {e}", cfg.command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
