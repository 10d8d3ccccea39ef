use std::process::ExitCode;

use clap::Parser;
use rotor_chain::config::{parse_config, Cli, Format};
use rotor_chain::error::ChainError;
use rotor_chain::experiments::run;

fn exit_code(err: &ChainError) -> u8 {
    match err {
        ChainError::Config(_) | ChainError::Io(_) => 1,
        ChainError::Domain(_) | ChainError::Resource(_) | ChainError::NoCrossing { .. } => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = parse_config(&cli).and_then(|config| {
        let table = run(&config)?;
        let text = match config.format {
            Format::Csv => table.to_csv(),
            Format::Json => table.to_json() + "\n",
        };
        match &config.output {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
