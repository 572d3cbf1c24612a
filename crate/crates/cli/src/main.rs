use std::process::ExitCode;

use clap::Parser;

use crossmod_cli::{render, run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|outcome| {
        let text = render(&outcome.value);
        match &cli.json_out {
            Some(path) => std::fs::write(path, &text)
                .map_err(|source| CliError::Write { path: path.display().to_string(), source })?,
            None => print!("{text}"),
        }
        Ok(outcome.exit_code())
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
