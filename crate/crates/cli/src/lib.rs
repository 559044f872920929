//! The `chowd` command-line tool.

pub mod args;
mod commands;
pub mod fixtures;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

pub use args::Cli;
pub use commands::run;

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub out: Option<PathBuf>,
    /// False when a checked invariant failed.
    pub verified: bool,
}

/// Process exit status: 0 on success, 2 when a verification failed, 1 on error.
pub fn exit_code<E>(result: &std::result::Result<Outcome, E>) -> u8 {
    match result {
        Ok(o) if o.verified => 0,
        Ok(_) => 2,
        Err(_) => 1,
    }
}

/// Provenance embedded in every output.
#[derive(Debug, Serialize)]
pub struct RunConfig<'a, A: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub args: &'a A,
}

impl<'a, A: Serialize> RunConfig<'a, A> {
    pub fn new(command: &'static str, args: &'a A) -> Self {
        RunConfig {
            tool: "chowd",
            version: env!("CARGO_PKG_VERSION"),
            command,
            args,
        }
    }

    /// `#` lines for CSV outputs.
    pub fn comment_lines(&self) -> Vec<String> {
        vec![format!(
            "config: {}",
            serde_json::to_string(self).expect("config serializes")
        )]
    }
}

pub(crate) fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub(crate) fn with_header(header: &[String], body: &str) -> String {
    let mut out = String::new();
    for line in header {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(body);
    out
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(verified: bool) -> Outcome {
        Outcome {
            text: String::new(),
            out: None,
            verified,
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code::<()>(&Ok(outcome(true))), 0);
        assert_eq!(exit_code::<()>(&Ok(outcome(false))), 2);
        assert_eq!(exit_code(&Err::<Outcome, _>(())), 1);
    }
}
