//! Command-line front end for parafis experiments: `generate`, `run`,
//! `compare` and `tune`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;

use cli::{Cli, Command};
use error::CliResult;

pub fn execute(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Generate(args) => commands::generate(&args).map(drop),
        Command::Run(args) => commands::run(&args).map(drop),
        Command::Compare(args) => commands::compare(&args).map(drop),
        Command::Tune(args) => commands::tune(&args).map(drop),
    }
}
