use std::process::ExitCode;

use clap::Parser;
use ordplanes_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    if let Some(text) = &outcome.output {
        match &cli.output {
            Some(path) => {
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            None => print!("{text}"),
        }
    }
    if let Some(m) = &outcome.message {
        eprintln!("{m}");
    }
    ExitCode::from(outcome.code as u8)
}
