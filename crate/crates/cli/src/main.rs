use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use phlo_cli::commands;
use phlo_cli::error::CliError;

#[derive(Parser)]
#[command(name = "phlo", version, about = "Verification harness for photon-like field objects")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites and write a JSON report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Overrides the configured seed; accepts decimal or 0x-prefixed hex.
        #[arg(long, value_parser = parse_seed)]
        seed: Option<u64>,
    },
    /// Sample the solution on a grid over its support and write CSV.
    Sample {
        #[arg(long)]
        config: PathBuf,
        /// Point counts `nx,ny,nz`.
        #[arg(long)]
        grid: String,
        #[arg(long, allow_hyphen_values = true)]
        xi: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute energy, period and the one-period action.
    Energy {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the Hodge star on every basis monomial.
    StarTable,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => s.replace('_', "").parse(),
    }
    .map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Verify { config, report, seed } => commands::verify(&config, report.as_deref(), seed),
        Command::Sample { config, grid, xi, out } => {
            let grid = commands::parse_grid(&grid)?;
            commands::sample(&config, grid, xi, &out)
        }
        Command::Energy { config } => {
            let (code, text) = commands::energy(&config)?;
            print!("{text}");
            Ok(code)
        }
        Command::StarTable => {
            print!("{}", commands::star_table_text());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("phlo: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
