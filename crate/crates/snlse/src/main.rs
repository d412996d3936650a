use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = snlse::cli::Cli::parse();
    match snlse::cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.class().exit_code())
        }
    }
}
