//! Command-line driver for the `illposed-core` experiments.
//!
//! Exit codes: 0 when every row passes, 2 for invalid input, 3 when the run
//! completed but some rows were flagged (unconverged solves, deviations above
//! tolerance, catalog mismatches).

pub mod args;
pub mod commands;
pub mod parse;
pub mod report;

use std::io::Write;

use anyhow::{bail, ensure, Context as _, Result};
use serde_json::{Map, Value};

pub use args::{Cli, Command, Format, GlobalArgs};
pub use commands::{dispatch, Context, Outcome};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_FLAGGED: u8 = 3;

const GLOBAL_KEYS: [&str; 4] = ["format", "output", "seed", "jobs"];

/// Fills options missing from the command line with values from `--config`.
pub fn apply_config(cli: &mut Cli) -> Result<()> {
    let Some(path) = cli.global.config.clone() else {
        return Ok(());
    };
    let text = std::fs::read_to_string(&path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let value: Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing config {}", path.display()))?;
    let Value::Object(mut all) = value else {
        bail!("config {} must hold a JSON object", path.display());
    };
    let mut global = Map::new();
    for key in GLOBAL_KEYS {
        if let Some(v) = all.remove(key) {
            global.insert(key.to_string(), v);
        }
    }
    let file_global: GlobalArgs = serde_json::from_value(Value::Object(global))
        .context("invalid global option in config")?;
    args::fill_from!(cli.global, file_global; format, output, seed, jobs);

    let rest = Value::Object(all);
    let bad = || format!("invalid option in config {}", path.display());
    match &mut cli.command {
        Command::Enumerate(a) => a.fill(serde_json::from_value(rest).with_context(bad)?),
        Command::VerifyTheorem(a) => a.fill(serde_json::from_value(rest).with_context(bad)?),
        Command::Collapse(a) => a.fill(serde_json::from_value(rest).with_context(bad)?),
        Command::Probe(a) => a.fill(serde_json::from_value(rest).with_context(bad)?),
        Command::Classify(a) => a.fill(serde_json::from_value(rest).with_context(bad)?),
        Command::Convergence(a) => a.fill(serde_json::from_value(rest).with_context(bad)?),
        Command::Growth(a) => a.fill(serde_json::from_value(rest).with_context(bad)?),
        Command::ExportOperator(a) => a.fill(serde_json::from_value(rest).with_context(bad)?),
    }
    Ok(())
}

/// Resolves the configuration, runs the command and returns the rendered
/// report together with the exit code it implies.
pub fn evaluate(mut cli: Cli) -> Result<(String, u8)> {
    apply_config(&mut cli)?;
    let jobs = cli.global.jobs.unwrap_or(1);
    ensure!(jobs >= 1, "--jobs must be at least 1");
    let ctx = Context {
        seed: cli.global.seed.unwrap_or(42),
        jobs,
    };
    let outcome = dispatch(&cli.command, &ctx)?;
    let text = outcome.render(cli.global.format);
    if let Some(path) = &cli.global.output {
        std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    } else {
        std::io::stdout().lock().write_all(text.as_bytes())?;
    }
    if outcome.flagged > 0 {
        eprintln!("{} row(s) flagged", outcome.flagged);
        Ok((text, EXIT_FLAGGED))
    } else {
        Ok((text, EXIT_OK))
    }
}

/// Runs the CLI and maps errors to [`EXIT_INVALID`].
pub fn run(cli: Cli) -> u8 {
    match evaluate(cli) {
        Ok((_, code)) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            EXIT_INVALID
        }
    }
}
