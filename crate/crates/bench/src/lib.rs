//! Shared inputs for the benchmarks.

use cklms_core::channel::Dataset;
use cklms_core::experiment::{realize, ExperimentConfig};

/// First realization of the benchmark data, truncated to `n_samples`.
pub fn dataset(rho: f64, n_samples: usize) -> Dataset {
    let mut cfg = ExperimentConfig::benchmark("bench", rho);
    cfg.signal.n_samples = n_samples;
    realize(&cfg, 0).expect("benchmark config is valid").dataset
}

pub fn benchmark_config(rho: f64, n_samples: usize, mc_runs: usize) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::benchmark("bench", rho);
    cfg.signal.n_samples = n_samples;
    cfg.mc_runs = mc_runs;
    cfg
}
