//! The `meq` command-line tool.
//!
//! Every command writes a compact JSON result document (to `--out` or stdout) and,
//! with `--plot`, an SVG figure. Randomized commands need `--seed` and echo
//! it in the document; identical flags give byte-identical output. Exit codes:
//! 0 on success, 1 on a failed computation or write, 2 when the request is
//! beyond the solvers' capability, 3 on invalid input.

pub mod commands;
pub mod config;
mod error;
pub mod svg;

use std::io::Write;

pub use commands::{compute, load_game, parse_beliefs, parse_grid, parse_groups, Envelope, Outcome};
pub use config::{Cli, Command, OutputArgs};
pub use error::CliError;

fn guard(path: &std::path::Path, force: bool) -> Result<(), CliError> {
    if path.exists() && !force {
        return Err(CliError::Validation(format!("{} exists; pass --force to overwrite", path.display())));
    }
    Ok(())
}

fn write(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

/// Run a parsed command line, writing files and stdout.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Validation("--threads must be positive".into()));
        }
        // a pool may already exist when called repeatedly in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = cli.command.output();
    if let Some(p) = &out.out {
        guard(p, out.force)?;
    }
    if let Some(p) = &out.plot {
        guard(p, out.force)?;
    }
    let outcome = compute(&cli.command, out.plot.is_some())?;
    match &out.out {
        Some(p) => write(p, &outcome.document)?,
        None => std::io::stdout()
            .write_all(outcome.document.as_bytes())
            .map_err(|e| CliError::Runtime(e.to_string()))?,
    }
    if let (Some(p), Some(svg)) = (&out.plot, &outcome.plot) {
        write(p, svg)?;
    }
    Ok(())
}
