//! Library half of the `sphosc` command: argument definitions, command
//! execution and output rendering.

pub mod args;
pub mod record;
pub mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};
use sphosc_core::Error;

/// Exit codes: success, numerical failure, usage error.
pub const EXIT_OK: u8 = 0;
pub const EXIT_NUMERIC: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParams(_) | Error::InvalidMode { .. } | Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

/// Parse `argv`, run the command and write the output. Returns the exit code.
pub fn run<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let echo = std::iter::once("sphosc".to_string())
        .chain(argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()))
        .collect::<Vec<_>>()
        .join(" ");
    let record = match record::execute(&cli.command, echo) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let rendered = match cli.format {
        Format::Json => render::to_json(&record),
        Format::Csv => render::to_csv(&record),
        Format::Table => Ok(render::to_table(&record)),
    };
    let written = rendered.and_then(|text| match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    });
    match written {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}
