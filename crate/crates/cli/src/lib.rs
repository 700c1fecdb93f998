//! Command-line front end for the hoplab experiments.

pub mod config;
pub mod criteria;
pub mod experiments;

use std::path::PathBuf;

use clap::Parser;

pub use config::{parse_config, parse_with_overrides, ConfigError, Experiment, RunConfig};
pub use experiments::{run, Outcome, RunError};

/// Environment variable that overrides the output directory.
pub const OUT_DIR_ENV: &str = "HOPLAB_OUT_DIR";

pub const EXIT_OK: u8 = 0;
pub const EXIT_ASSERTION: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hoplab",
    version,
    about = "Run a hoplab experiment and write its CSV artifacts"
)]
pub struct Cli {
    /// Config file of `key = value` lines.
    pub config: Option<PathBuf>,
    /// Experiment to run; overrides the config's `experiment` key.
    #[arg(long)]
    pub experiment: Option<String>,
    /// Extra or overriding `key=value` settings.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

/// Builds the run configuration from the command line and environment.
pub fn resolve(cli: &Cli, out_dir_env: Option<String>) -> Result<RunConfig, String> {
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?,
        None => String::new(),
    };
    let mut overrides = Vec::new();
    if let Some(name) = &cli.experiment {
        overrides.push(("experiment".to_string(), name.clone()));
    }
    for pair in &cli.set {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| format!("--set {pair}: expected KEY=VALUE"))?;
        overrides.push((k.to_string(), v.to_string()));
    }
    let mut cfg = parse_with_overrides(&text, &overrides).map_err(|e| match &cli.config {
        Some(path) if e.line.is_some() => format!("{}:{e}", path.display()),
        _ => e.to_string(),
    })?;
    if let Some(dir) = out_dir_env.filter(|d| !d.is_empty()) {
        cfg.output = PathBuf::from(dir);
    }
    Ok(cfg)
}

/// Runs the command line and returns the process exit code.
pub fn main_with(cli: &Cli) -> u8 {
    let cfg = match resolve(cli, std::env::var(OUT_DIR_ENV).ok()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    match run(&cfg) {
        Ok(outcome) => {
            for (k, v) in &outcome.summary {
                println!("{k} = {v}");
            }
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if outcome.passed {
                EXIT_OK
            } else {
                eprintln!("check failed for experiment {}", cfg.experiment);
                EXIT_ASSERTION
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}
