//! `tqo`: build lattice models, verify the topological-order conditions and
//! tabulate ground-state degeneracies.
//!
//! Exit codes: 0 pass, 1 check failed, 2 bad input or refused precondition,
//! 3 resource cap, 4 eigensolver non-convergence.

mod commands;
mod config;
mod report;

use clap::{Parser, Subcommand};
use commands::Fault;
use config::RunConfig;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "tqo", version, about = "Commuting-projector models and topological-order checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// `key = value` run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Report path; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, hide = true)]
    fault: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print dimension, term counts and validation residuals.
    Build,
    /// Run the configured checks and write a report.
    Verify,
    /// Ground-state degeneracy by projector rank and by oracle.
    GsdTable,
}

fn run(cli: Cli) -> tqo_core::Result<i32> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.settings.seed = s;
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    if let Some(o) = cli.out {
        cfg.out = Some(o);
    }
    let fault: Option<Fault> = cli.fault.as_deref().map(str::parse).transpose()?;
    match cli.cmd {
        Cmd::Build => commands::cmd_build(&cfg, fault),
        Cmd::Verify => commands::cmd_verify(&cfg, fault),
        Cmd::GsdTable => commands::cmd_gsd_table(&cfg),
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("tqo: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
