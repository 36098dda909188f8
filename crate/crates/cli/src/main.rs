mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// A problem with how the tool was invoked rather than a failure inside it.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn is_usage(err: &anyhow::Error) -> bool {
    use natc_core::Error as E;
    err.chain().any(|cause| {
        cause.is::<UsageError>()
            || cause.is::<std::io::Error>()
            || matches!(
                cause.downcast_ref::<E>(),
                Some(
                    E::Syntax { .. }
                        | E::Unsupported { .. }
                        | E::InvalidHardware(_)
                        | E::InvalidNoise(_)
                        | E::InvalidBenchmark(_)
                        | E::InvalidCircuit(_)
                        | E::TooManyQubits { .. }
                        | E::InsufficientSites { .. }
                        | E::Json(_)
                        | E::Config(_)
                )
            )
    })
}

fn report_error(kind: &str, message: &str) {
    let body = serde_json::json!({ "error": message, "kind": kind });
    eprintln!("{body}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report_error("usage", e.to_string().trim());
            return ExitCode::from(2);
        }
    };
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if is_usage(&e) => {
            report_error("usage", &format!("{e:#}"));
            ExitCode::from(2)
        }
        Err(e) => {
            report_error("internal", &format!("{e:#}"));
            ExitCode::from(1)
        }
    }
}
