use std::process::ExitCode;

use clap::Parser;
use epk::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.execute(&mut std::io::stdout().lock()) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("epk: {e}");
            ExitCode::from(2)
        }
    }
}
