//! Command-line front end for `nuradial-core`: configuration parsing, the
//! `analyze`, `spectrum`, `wavefunction` and `validate` subcommands, and
//! CSV/JSON rendering.
//!
//! Exit codes: 0 success, 2 configuration error, 3 no physical result,
//! 4 validation failure, 1 anything else.

pub mod config;
pub mod error;
pub mod run;
pub mod table;

use std::io::Write;

pub use config::{parse_config, Cli, Command, Format, RunConfig};
pub use error::CliError;
pub use run::{run, Outcome};
pub use table::{Cell, Table};

/// Parses, runs and renders one invocation; returns the text to emit.
pub fn execute(command: &Command) -> Result<(String, RunConfig, i32), CliError> {
    let cfg = parse_config(command)?;
    let outcome = run(command, &cfg)?;
    let text = match cfg.format {
        Format::Csv => outcome.table.to_csv(),
        Format::Json => outcome.table.to_json(),
    };
    Ok((text, cfg, outcome.exit_code))
}

/// Full CLI behaviour minus argument parsing: writes output and returns the
/// process exit code.
pub fn main_with(command: &Command) -> i32 {
    let result = execute(command).and_then(|(text, cfg, code)| {
        match &cfg.out {
            Some(path) => std::fs::write(path, &text)
                .map_err(|e| CliError::Io(format!("out: cannot write {}: {e}", path.display())))?,
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))?,
        }
        Ok(code)
    });
    match result {
        Ok(code) => {
            if code == error::EXIT_VALIDATION {
                eprintln!(
                    "{}: closed form disagrees with the oracle on the effective potential",
                    command.name()
                );
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
