mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Exit status classes.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input or invocation; exit 2.
    Usage(String),
    /// Well-formed input that fails a mathematical precondition; exit 1.
    Domain(String),
}

impl From<stringalg::Error> for CliError {
    fn from(e: stringalg::Error) -> Self {
        match e {
            stringalg::Error::Parse { .. }
            | stringalg::Error::Json(_)
            | stringalg::Error::UnknownVertex(_)
            | stringalg::Error::UnknownArrow(_)
            | stringalg::Error::Duplicate { .. }
            | stringalg::Error::NotComposable(_)
            | stringalg::Error::ShortRelation(_) => CliError::Usage(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
