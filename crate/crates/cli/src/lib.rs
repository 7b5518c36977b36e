//! Command-line front end for `pextremal-core`.
//!
//! [`run`] parses an argument list, dispatches to one computation and
//! prints a single [`ResultEnvelope`] as JSON on the output stream.
//! Auxiliary files (CSV, JSON-lines, PGM) go to the `--out` directory.

mod args;
mod commands;
pub mod envelope;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};
use serde_json::Value;

pub use args::{Cli, Command};
pub use envelope::{Diagnostics, ErrorInfo, ResultEnvelope, Status, SCHEMA_VERSION};
pub use error::{CliError, EXIT_INVALID, EXIT_IO, EXIT_NONCONVERGENCE, EXIT_OK, EXIT_USAGE};
pub use output::{emit_plot_data, PlotData};

pub const THREADS_VAR: &str = "PEXTREMAL_THREADS";

fn threads_requested(raw: Option<OsString>) -> Result<usize, CliError> {
    let Some(raw) = raw else { return Ok(0) };
    raw.to_str()
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| {
            CliError::InvalidParams(format!(
                "{THREADS_VAR} must be a non-negative integer, got {raw:?}"
            ))
        })
}

/// Parse `args` (program name first), run the command and return the exit
/// code. Help and version go to `out`; usage errors go to `err` with no
/// envelope. Every other outcome prints one envelope on `out`, and failures
/// also print a one-line message on `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let mut text = e.render().to_string();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            if !text.contains("Usage:") {
                text.push_str(&format!("\n{}\n", Cli::command().render_usage()));
            }
            let _ = err.write_all(text.as_bytes());
            return code;
        }
    };

    let started = Instant::now();
    let command = cli.command.name();
    let mut run = commands::Run::default();
    let mut threads = 0;
    let result = threads_requested(std::env::var_os(THREADS_VAR)).and_then(|t| {
        threads = t;
        dispatch(&cli.command, &mut run)
    });

    let error = result.as_ref().err().map(|e| ErrorInfo {
        kind: e.kind().into(),
        message: e.to_string(),
        exit_code: e.exit_code(),
    });
    let envelope = ResultEnvelope {
        schema_version: SCHEMA_VERSION.into(),
        command: command.into(),
        status: if error.is_some() {
            Status::Error
        } else {
            Status::Ok
        },
        inputs: run.inputs,
        outputs: run.outputs,
        diagnostics: Diagnostics {
            wall_time_s: started.elapsed().as_secs_f64(),
            iterations: run.iterations,
            residual: run.residual,
            threads_requested: threads,
            threads_used: 1,
            files: run.files.iter().map(|p| p.display().to_string()).collect(),
        },
        error,
    };
    let mut text = envelope.to_json();
    text.push('\n');
    if out
        .write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .is_err()
    {
        return EXIT_IO;
    }
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "pextremal {command}: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: &Command, run: &mut commands::Run) -> Result<(), CliError> {
    run.inputs = match command {
        Command::Rlambda(a) => serde_json::to_value(a),
        Command::Eig2d(a) => serde_json::to_value(a),
        Command::Flow(a) => serde_json::to_value(a),
        Command::CheckNarrow(a) => serde_json::to_value(a),
        Command::Hsweep(a) => serde_json::to_value(a),
        Command::Cone(a) => serde_json::to_value(a),
    }
    .unwrap_or(Value::Null);
    match command {
        Command::Rlambda(a) => commands::rlambda(a, run),
        Command::Eig2d(a) => commands::eig2d(a, run),
        Command::Flow(a) => commands::flow(a, run),
        Command::CheckNarrow(a) => commands::check_narrow(a, run),
        Command::Hsweep(a) => commands::hsweep(a, run),
        Command::Cone(a) => commands::cone(a, run),
    }
}
