mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

/// The solver stopped without converging.
#[derive(Debug)]
pub struct NotConverged(pub String);

impl std::fmt::Display for NotConverged {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "rotation estimate did not converge: {}", self.0)
    }
}

impl std::error::Error for NotConverged {}

fn init_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("LISSPHERE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| anyhow::anyhow!("LISSPHERE_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        anyhow::bail!("LISSPHERE_THREADS must be a positive integer, got 0");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    init_threads()?;
    match cli.command {
        Command::Curve(a) => commands::curve(a),
        Command::Nodes(a) => commands::nodes(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Coeffs(a) => commands::coeffs(a),
        Command::Eval(a) => commands::eval(a),
        Command::Quad(a) => commands::quad(a),
        Command::Lebesgue(a) => commands::lebesgue(a),
        Command::Converge(a) => commands::converge(a),
        Command::Rotate(a) => commands::rotate(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            // numerical failures exit 1, bad arguments and inputs exit 2
            if e.is::<NotConverged>() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
