use std::process::ExitCode;

use clap::Parser;
use parafis_cli::cli::Cli;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match parafis_cli::execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("parafis: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
