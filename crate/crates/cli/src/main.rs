//! `bcv`: verification suites, branch integration and mesh export for
//! surfaces in BCV spaces.

mod failure;
mod integrate;
mod mesh;
mod output;
mod verify;

use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Parser, Subcommand};

use failure::{CmdResult, Failure};

#[derive(Debug, Parser)]
#[command(name = "bcv", version, about = "Biconservative surfaces in BCV spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run verification suites and print a JSON report.
    Verify(verify::VerifyArgs),
    /// Integrate the non-CMC rotational branch and print a CSV trajectory.
    Integrate(integrate::IntegrateArgs),
    /// Export a sampled surface as an OBJ mesh.
    Mesh(mesh::MeshArgs),
}

fn configure_threads() -> CmdResult<()> {
    let Ok(value) = std::env::var("BCV_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::usage(anyhow!("BCV_THREADS must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(Failure::usage)
}

fn run(cli: Cli) -> CmdResult<bool> {
    configure_threads()?;
    match cli.command {
        Command::Verify(args) => verify::run(&args),
        Command::Integrate(args) => integrate::run(&args).map(|()| true),
        Command::Mesh(args) => mesh::run(&args).map(|()| true),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
