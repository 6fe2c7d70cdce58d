use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use sawphoton::design::DEFAULT_SWEEP_CAP;
use sawphoton_cli::commands;
use sawphoton_cli::config::{load_config, Models, RunConfig};
use sawphoton_cli::CliError;

#[derive(Parser)]
#[command(name = "sawphoton", version, about = "Simulate and design SAW-driven single-photon sources")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Overrides run.seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory; reports go to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Overrides design.epsilon.
    #[arg(long, global = true)]
    epsilon: Option<f64>,

    /// Overrides run.shards. Results do not depend on it.
    #[arg(long, global = true)]
    shards: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form device figures.
    Analytic,
    /// Monte Carlo run; writes event streams, histograms and summary.json.
    Simulate,
    /// Accuracy budget and minimum divider.
    Design,
    /// Budget over a parameter grid; writes sweep.csv.
    Sweep {
        /// JSON grid of values per parameter.
        #[arg(long)]
        grid: PathBuf,
        /// Largest number of grid points accepted.
        #[arg(long, default_value_t = DEFAULT_SWEEP_CAP)]
        cap: u64,
        /// Also simulate this many cycles per point.
        #[arg(long)]
        mc_cycles: Option<u64>,
    },
    /// Checks the reference device figures; exit code 4 on failure.
    Verify,
}

fn load(cli: &Cli) -> Result<(RunConfig, Models), CliError> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config("--config is required".into()))?;
    let (mut config, _) = load_config(path)?;
    if let Some(seed) = cli.seed {
        config.run.seed = seed;
    }
    if let Some(shards) = cli.shards {
        config.run.shards = shards;
    }
    if let Some(epsilon) = cli.epsilon {
        config.design.epsilon = epsilon;
    }
    let models = config.models()?;
    Ok((config, models))
}

fn emit(value: &Value, out: Option<&Path>, name: &str) -> Result<(), CliError> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(sawphoton_cli::output::io_error(dir))?;
            sawphoton_cli::output::write_json(&dir.join(name), value)
        }
        None => {
            println!("{}", serde_json::to_string_pretty(value).expect("JSON values always serialize"));
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Analytic => {
            let (_, m) = load(cli)?;
            emit(&commands::analytic(&m)?, cli.out.as_deref(), "analytic.json")
        }
        Command::Simulate => {
            let (config, m) = load(cli)?;
            let out = cli
                .out
                .as_deref()
                .ok_or_else(|| CliError::Config("simulate needs --out".into()))?;
            commands::simulate(&config, &m, out)?;
            eprintln!("wrote results to {}", out.display());
            Ok(())
        }
        Command::Design => {
            let (_, m) = load(cli)?;
            emit(&commands::design(&m, None)?, cli.out.as_deref(), "design.json")
        }
        Command::Sweep { grid, cap, mc_cycles } => {
            let (_, m) = load(cli)?;
            let text = std::fs::read_to_string(grid)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", grid.display())))?;
            let grid = commands::parse_grid(&text)?;
            let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            let rows = commands::sweep_to_csv(&m, &grid, None, *cap, *mc_cycles, &out)?;
            eprintln!("wrote {rows} rows to {}", out.join("sweep.csv").display());
            Ok(())
        }
        Command::Verify => {
            let checks = commands::verify()?;
            let mut failed = 0;
            for c in &checks {
                println!(
                    "{} {}: {} (expected {})",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.expected
                );
                failed += usize::from(!c.pass);
            }
            if failed > 0 {
                return Err(CliError::VerifyFailed { failed });
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
