//! Batch front end for the polaron energy bounds: constants, the two PTF
//! solvers, bound reports, parameter sweeps with plots, and the verification
//! suite.
//!
//! Exit codes: 0 success, 1 verification or consistency failure, 2 usage or
//! configuration error.

pub mod commands;
pub mod config;
pub mod output;
pub mod plot;
pub mod sweep;
pub mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{Fault, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failure(String),
    #[error(transparent)]
    Core(#[from] polaron_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) | CliError::Core(_) | CliError::Io { .. } => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "polaron",
    version,
    about = "Polaron Thomas-Fermi energy and N-polaron energy bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the special constants with their formulas and cross-checks.
    Constants,
    /// Solve the PTF problem with both solvers and compare them.
    Ptf,
    /// Evaluate every bound that applies to (alpha, U, N).
    Bounds,
    /// Sweep (alpha, U, N), write the CSV table and the plots.
    Sweep,
    /// Run the seeded property suites.
    Verify,
    /// Print the full configuration, defaults included.
    Config,
}

#[derive(Debug, Default, Args)]
pub struct Overrides {
    /// Flat key = value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<String>,
    #[arg(long = "U", global = true, allow_negative_numbers = true)]
    pub u: Option<String>,
    #[arg(long = "N", global = true, allow_negative_numbers = true)]
    pub n: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub mu: Option<String>,
    /// Collapse constant C_G.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub cg: Option<String>,
    /// Lieb-Oxford constant c_L.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub cl: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<String>,
    /// Test hook: plant a known fault in the verification suite.
    #[arg(long, global = true, value_name = "FAULT")]
    pub inject_fault: Option<String>,
    /// Any config key, as KEY=VALUE; may be repeated.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

impl Overrides {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        for item in &self.set {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got '{item}'")))?;
            c.set(k.trim(), v)?;
        }
        let flags = [
            ("alpha", &self.alpha),
            ("U", &self.u),
            ("N", &self.n),
            ("mu", &self.mu),
            ("c_g", &self.cg),
            ("c_l", &self.cl),
            ("seed", &self.seed),
            ("inject_fault", &self.inject_fault),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                c.set(key, v)?;
            }
        }
        if let Some(out) = &self.out {
            c.out = out.clone();
        }
        c.validate()?;
        Ok(c)
    }
}

/// What a command produced: text for `stdout`, and a failure that turns the
/// exit code to 1 after the text has been written.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outcome {
    pub text: String,
    pub failure: Option<String>,
}

impl From<String> for Outcome {
    fn from(text: String) -> Self {
        Self {
            text,
            failure: None,
        }
    }
}

/// Runs one invocation and returns its exit code. Everything the command
/// produces goes to `stdout`; diagnostics and warnings go to `stderr`.
pub fn run<W: std::io::Write, E: std::io::Write>(cli: &Cli, stdout: &mut W, stderr: &mut E) -> i32 {
    let result = cli.overrides.resolve().and_then(|config| {
        let outcome = match cli.command {
            Command::Constants => commands::constants(&config)?,
            Command::Ptf => commands::ptf(&config)?,
            Command::Bounds => commands::bounds(&config, stderr)?,
            Command::Sweep => sweep::command(&config, stderr)?,
            Command::Verify => verify::command(&config)?,
            Command::Config => config.to_text().into(),
        };
        stdout
            .write_all(outcome.text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?;
        match outcome.failure {
            Some(msg) => Err(CliError::Failure(msg)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
