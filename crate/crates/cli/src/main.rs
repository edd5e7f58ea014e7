use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ioncavity_cli::cli::Cli;
use ioncavity_cli::config::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match ioncavity_cli::run(&cli).and_then(|(outcome, cfg)| {
        write_report(&outcome.text, cfg.out.as_deref())?;
        outcome.failure.map_or(Ok(()), Err)
    }) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ioncavity: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn write_report(text: &str, out: Option<&std::path::Path>) -> Result<(), CliError> {
    let res = match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    res.map_err(|e| CliError::Config(format!("cannot write report: {e}")))
}
