//! Command-line front end: argument and config resolution, the four
//! subcommands, CSV/JSON rendering.

pub mod cli;
pub mod commands;
pub mod config;
pub mod output;

use cli::{Cli, Command};
use commands::Outcome;
use config::{CliError, Defaults, RunConfig};

/// Resolves settings and runs one subcommand. Returns the report and the
/// resolved config (for `--out`).
pub fn run(cli: &Cli) -> Result<(Outcome, RunConfig), CliError> {
    match &cli.command {
        Command::Table1(common) => {
            let cfg = RunConfig::resolve(common, Defaults::tables())?;
            Ok((commands::table1(&cfg)?, cfg))
        }
        Command::Table2 { common, source } => {
            let cfg = RunConfig::resolve(common, Defaults::tables())?;
            Ok((commands::table2(&cfg, *source)?, cfg))
        }
        Command::Gate { gate, common } => {
            let cfg = RunConfig::resolve(common, Defaults::single())?;
            Ok((commands::gate(&cfg, *gate)?, cfg))
        }
        Command::VerifyRwa(common) => {
            let cfg = RunConfig::resolve(common, Defaults::single())?;
            Ok((commands::verify_rwa(&cfg)?, cfg))
        }
    }
}
