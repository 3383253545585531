//! Library behind the `geomod` binary: command implementations return
//! structured results so tests can drive them directly.

pub mod args;
pub mod commands;
pub mod io;
pub mod synth;

use std::fmt;

pub use args::{Cli, Command};

/// Command failure, split by exit code: usage errors exit 2, runtime
/// failures exit 1.
#[derive(Debug)]
pub enum CmdError {
    Usage(String),
    Runtime(String),
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) | Self::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<geomod_core::Error> for CmdError {
    fn from(e: geomod_core::Error) -> Self {
        Self::Runtime(e.to_string())
    }
}

pub fn run(cli: &Cli) -> Result<(), CmdError> {
    match &cli.command {
        Command::Ingest(a) => commands::ingest::run(a).map(|_| ()),
        Command::Sample(a) => commands::sample::run(a).map(|_| ()),
        Command::Detect(a) => commands::detect::run(a).map(|_| ()),
        Command::Sweep(a) => commands::sweep::run(a).map(|_| ()),
        Command::Rank(a) => commands::rank::run(a).map(|_| ()),
        Command::Oracle(a) => commands::oracle::run(a),
        Command::Synth(a) => commands::synth_cmd::run(a),
    }
}

pub(crate) fn require_file(path: &std::path::Path, what: &str) -> Result<(), CmdError> {
    if !path.is_file() {
        return Err(CmdError::Usage(format!(
            "{what} not found: {}",
            path.display()
        )));
    }
    Ok(())
}

pub(crate) fn require_sigma(sigma: f64) -> Result<(), CmdError> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(CmdError::Usage(format!(
            "--sigma must be finite and positive, got {sigma}"
        )));
    }
    Ok(())
}
