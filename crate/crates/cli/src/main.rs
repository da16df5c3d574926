//! `qgenml` — train and evaluate quantum-kernel and variational classifiers
//! on genomic sequence data.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use qgenml_cli::commands::{benchmark, kernel, pairplot, predict, train, verify, CliError};
use qgenml_cli::config::RunConfig;

#[derive(Parser)]
#[command(
    name = "qgenml",
    about = "Quantum-enhanced classifiers for genomic sequences, on a simulated backend",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ConfigArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the configuration file.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the output directory in the configuration file.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ConfigArgs {
    fn load(&self) -> Result<RunConfig, CliError> {
        let mut config = RunConfig::load(&self.config, self.seed)?;
        if let Some(out) = &self.out {
            config.output_dir = out.clone();
        }
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Train a single (feature map, algorithm) pair and save the model.
    Train {
        #[command(flatten)]
        config: ConfigArgs,
        /// Suppress wall-time reporting.
        #[arg(long)]
        no_timing: bool,
    },
    /// Classify sequences from a CSV file with a saved model.
    Predict {
        /// Model artifact written by `train` or `benchmark`.
        #[arg(long)]
        model: PathBuf,
        /// CSV with a `sequence` column.
        #[arg(long)]
        input: PathBuf,
        /// Output CSV path (`sequence,score,label`).
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full feature-map x algorithm grid on one shared split.
    Benchmark {
        #[command(flatten)]
        config: ConfigArgs,
        /// Omit wall-time fields from every output, making the run
        /// byte-for-byte reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// Write Gram-matrix CSV files for the configured feature maps.
    Kernel {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Run built-in correctness checks; audit a stored Gram matrix.
    Verify {
        /// Kernel-matrix CSV to audit for symmetry, unit diagonal, value
        /// range, and positive semidefiniteness.
        #[arg(long)]
        gram: Option<PathBuf>,
        /// Seed for the randomized checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Export PCA scores with labels and split membership for plotting.
    PairplotData {
        #[command(flatten)]
        config: ConfigArgs,
    },
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Train { config, no_timing } => train::run(&config.load()?, !no_timing),
        Command::Predict { model, input, out } => predict::run(&model, &input, &out),
        Command::Benchmark { config, no_timing } => benchmark::run(&config.load()?, !no_timing),
        Command::Kernel { config } => kernel::run(&config.load()?),
        Command::Verify { gram, seed } => verify::run(gram.as_deref(), seed),
        Command::PairplotData { config } => pairplot::run(&config.load()?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Failed(error)) => {
            eprintln!("error: {error}");
            ExitCode::from(2)
        }
    }
}
