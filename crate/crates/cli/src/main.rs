use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use chowd_cli::{exit_code, run, Cli, Outcome};

fn emit(outcome: &Outcome) -> anyhow::Result<()> {
    match &outcome.out {
        Some(path) => fs::write(path, &outcome.text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(outcome.text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli).and_then(|o| emit(&o).map(|()| o));
    match &result {
        Ok(o) if !o.verified => eprintln!("chowd: verification failed"),
        Err(e) => eprintln!("chowd: {e:#}"),
        Ok(_) => {}
    }
    ExitCode::from(exit_code(&result))
}
