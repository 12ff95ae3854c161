use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rfom2::experiment::{run_experiment, sweep_quadrature, ExperimentConfig, RunReport};

#[derive(Parser)]
#[command(version, about = "Run recycled FOM matrix-function experiments from a TOML config")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured problem sequence.
    Run {
        config: PathBuf,
        /// Override a config key, e.g. `--set k=20`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// CSV destination; overrides `output` in the config.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Evaluate one problem for a list of quadrature sizes.
    Sweep {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        nquad: Vec<usize>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn emit(report: &RunReport, output: Option<PathBuf>) -> rfom2::Result<()> {
    for note in &report.notes {
        eprintln!("note: {note}");
    }
    match output {
        Some(path) => report.write_csv(path),
        None => {
            print!("{}", report.to_csv());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, overrides, output } => ExperimentConfig::from_file(&config, &overrides)
            .and_then(|cfg| {
                let report = run_experiment(&cfg)?;
                emit(&report, output.or(cfg.output))?;
                Ok(report)
            }),
        Command::Sweep { config, nquad, overrides, output } => {
            ExperimentConfig::from_file(&config, &overrides).and_then(|cfg| {
                let report = sweep_quadrature(&cfg, &nquad)?;
                emit(&report, output.or(cfg.output))?;
                Ok(report)
            })
        }
    };
    match result {
        Ok(report) if report.has_failures() => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
