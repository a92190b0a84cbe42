//! Scenario runner for the moyalspin library.

mod config;
mod error;
mod output;
mod scenarios;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{parse_config, Overrides, Scenario};
use error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "moyalspin", version, about = "Phase-space quantum mechanics with spin: checks and scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Schwinger algebra and quantizer identities for one spin dimension and kernel.
    #[command(allow_negative_numbers = true)]
    QuantizerCheck(Overrides),
    /// Wigner function of an oscillator eigenstate times a spin basis state.
    #[command(allow_negative_numbers = true)]
    Wigner(Overrides),
    /// Moyal and spin star products against their defining identities.
    #[command(allow_negative_numbers = true)]
    StarCheck(Overrides),
    /// Landau-level Wigner function in the reduced (p2, q2) plane.
    #[command(allow_negative_numbers = true)]
    Landau(Overrides),
    /// Spin-1/2 magnetic resonance trajectory.
    #[command(allow_negative_numbers = true)]
    Resonance(Overrides),
    /// Prints the resolved configuration in canonical form.
    #[command(allow_negative_numbers = true)]
    EmitConfig {
        #[arg(long, value_enum)]
        scenario: Option<Scenario>,
        #[command(flatten)]
        flags: Overrides,
    },
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("MOYALSPIN_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::ConfigInvalid(format!("MOYALSPIN_THREADS: expected a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::ConfigInvalid(format!("MOYALSPIN_THREADS: {e}")))
}

fn execute(command: Command) -> CliResult<()> {
    let (scenario, flags) = match command {
        Command::EmitConfig { scenario, flags } => {
            let config = parse_config(scenario, &flags)?;
            print!("{}", config.canonical_json());
            return Ok(());
        }
        Command::QuantizerCheck(f) => (Scenario::QuantizerCheck, f),
        Command::Wigner(f) => (Scenario::Wigner, f),
        Command::StarCheck(f) => (Scenario::StarCheck, f),
        Command::Landau(f) => (Scenario::Landau, f),
        Command::Resonance(f) => (Scenario::Resonance, f),
    };
    let config = parse_config(Some(scenario), &flags)?;
    let report = scenarios::run(&config)?;
    let kernel = config.kernel()?;
    let paths = output::write(&config, &kernel, &report)?;
    for c in &report.checks {
        let status = if c.passed { "ok" } else { "FAILED" };
        println!("{status:<6} {:<32} {:e} (tolerance {:e})", c.name, c.value, c.tolerance);
    }
    for p in &paths {
        println!("wrote {}", p.display());
    }
    let failed = report.failed();
    if failed.is_empty() {
        println!("{scenario}: all {} checks passed", report.checks.len());
        Ok(())
    } else {
        Err(CliError::CheckFailed { scenario, failed })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| execute(cli.command));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
