mod args;
mod commands;

use args::{config_tokens, Cli, Command};
use clap::Parser;
use commands::CliError;
use std::process::ExitCode;

/// Worker threads for the simulation engine; unset means one per core.
const THREADS_ENV: &str = "STBSIM_THREADS";

fn parse_cli() -> Result<Cli, CliError> {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::try_parse_from(&argv).unwrap_or_else(|e| e.exit());
    let Some(path) = cli.command.config_path() else { return Ok(cli) };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let mut merged = argv;
    merged.extend(config_tokens(&text).map_err(CliError::config)?);
    Ok(Cli::try_parse_from(&merged).unwrap_or_else(|e| e.exit()))
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| CliError::config(format!("{THREADS_ENV} must be a count, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::config(e.to_string()))
}

fn run() -> Result<(), CliError> {
    let cli = parse_cli()?;
    init_threads()?;
    match &cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Scenario(a) => commands::scenario(a),
        Command::SamplerCheck(a) => commands::sampler_check(a),
        Command::Regions(a) => commands::regions(a),
        Command::Bench(a) => commands::bench(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
