use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use riordan_cli::{execute, Cli, CliError};

fn run(cli: &Cli) -> Result<(), CliError> {
    let text = execute(&cli.command)?;
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("riordan: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
