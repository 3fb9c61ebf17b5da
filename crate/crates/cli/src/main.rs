//! `cklms`: run the channel-equalization benchmark and the numerical self-checks.

mod config;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cklms_core::experiment::{run_experiment, run_experiment_timed, ExperimentResult};
use cklms_core::report::{emit_results, OutputFormat};
use clap::{Parser, Subcommand};

/// Output directory used when neither `--out` nor the environment variable is set.
const DEFAULT_OUT_DIR: &str = "results";
const STEADY_WINDOW: usize = 500;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read config {}: {source}", path.display())]
    ReadConfig {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config {}: {source}", path.display())]
    ParseConfig {
        path: PathBuf,
        source: Box<toml::de::Error>,
    },
    #[error("invalid config {}: {message}", path.display())]
    Config { path: PathBuf, message: String },
    #[error("cannot create output directory {}: {source}", path.display())]
    OutDir {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("no experiment named `{0}` in the config")]
    UnknownExperiment(String),
    #[error("experiment `{name}`: {source}")]
    Run {
        name: String,
        source: cklms_core::Error,
    },
    #[error(transparent)]
    Core(#[from] cklms_core::Error),
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

#[derive(Debug, Parser)]
#[command(
    name = "cklms",
    version,
    about = "Complex kernel LMS channel-equalization benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the Monte-Carlo equalization experiments of a config file.
    ///
    /// Writes one learning-curve file per experiment, named after it.
    Equalize {
        /// TOML config with one or more [[experiment]] tables; the bundled
        /// benchmark config is used when omitted.
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        /// Output directory.
        #[arg(long, value_name = "DIR", env = "CKLMS_OUT_DIR", default_value = DEFAULT_OUT_DIR)]
        out: PathBuf,
        /// Output format: csv or json.
        #[arg(long, value_name = "FORMAT", default_value = "csv")]
        format: OutputFormat,
        /// Only run the named experiment (repeatable).
        #[arg(long, value_name = "NAME")]
        experiment: Vec<String>,
        /// Override the number of Monte-Carlo runs of every experiment.
        #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
        mc_runs: Option<u64>,
        /// Record wall-clock time in the JSON metadata (output is then no
        /// longer byte-reproducible).
        #[arg(long)]
        timing: bool,
        /// Print the bundled default config and exit.
        #[arg(long, conflicts_with_all = ["config", "experiment", "mc_runs", "timing"])]
        print_default_config: bool,
    },
    /// Check finite-difference Wirtinger derivatives against closed forms.
    VerifyWirtinger {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check Hermitian symmetry and positive semidefiniteness of a random
    /// complex Gaussian Gram matrix.
    VerifyKernel {
        /// Number of random points.
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..=2000))]
        n_points: u64,
        /// Kernel width.
        #[arg(long, default_value_t = 5.0)]
        sigma: f64,
        /// Dimension of the points.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
        dim: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn summarize(result: &ExperimentResult, path: &Path) {
    println!("{} -> {}", result.config.name, path.display());
    for curve in &result.curves {
        let mut line = format!(
            "  {:<12} steady-state {:>8.2} dB",
            curve.algorithm,
            curve.steady_state_db(STEADY_WINDOW)
        );
        if let Some(dict) = &curve.dictionary {
            let mean =
                dict.final_sizes.iter().sum::<usize>() as f64 / dict.final_sizes.len() as f64;
            line.push_str(&format!(", mean dictionary size {mean:.1}"));
        }
        println!("{line}");
    }
}

fn equalize(
    config: Option<&Path>,
    out: &Path,
    format: OutputFormat,
    only: &[String],
    mc_runs: Option<u64>,
    timing: bool,
) -> Result<(), CliError> {
    let mut experiments = config::load(config)?;
    for name in only {
        if !experiments.iter().any(|e| &e.name == name) {
            return Err(CliError::UnknownExperiment(name.clone()));
        }
    }
    if !only.is_empty() {
        experiments.retain(|e| only.contains(&e.name));
    }
    std::fs::create_dir_all(out).map_err(|source| CliError::OutDir {
        path: out.to_path_buf(),
        source,
    })?;
    for mut exp in experiments {
        if let Some(n) = mc_runs {
            exp.mc_runs = n as usize;
        }
        let result = if timing {
            run_experiment_timed(&exp)
        } else {
            run_experiment(&exp)
        }
        .map_err(|source| CliError::Run {
            name: exp.name.clone(),
            source,
        })?;
        let path = out.join(format!("{}.{}", exp.name, format.extension()));
        emit_results(&result, format, &path)?;
        summarize(&result, &path);
    }
    Ok(())
}

fn report(checks: &[verify::Check]) -> Result<(), CliError> {
    let mut failed = 0;
    for c in checks {
        println!(
            "{} {}: {}",
            if c.pass { "ok  " } else { "FAIL" },
            c.name,
            c.detail
        );
        failed += !c.pass as usize;
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(failed))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Equalize {
            print_default_config: true,
            ..
        } => {
            print!("{}", config::DEFAULT_CONFIG);
            Ok(())
        }
        Command::Equalize {
            config,
            out,
            format,
            experiment,
            mc_runs,
            timing,
            ..
        } => equalize(
            config.as_deref(),
            &out,
            format,
            &experiment,
            mc_runs,
            timing,
        ),
        Command::VerifyWirtinger { seed } => report(&verify::wirtinger(seed)?),
        Command::VerifyKernel {
            n_points,
            sigma,
            dim,
            seed,
        } => report(&verify::kernel(
            n_points as usize,
            sigma,
            dim as usize,
            seed,
        )?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
