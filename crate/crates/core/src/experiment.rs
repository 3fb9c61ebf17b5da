//! Monte-Carlo learning curves for the channel-equalization benchmark.
//!
//! Every run draws its own signal and noise realization, builds one dataset
//! and feeds that same dataset to every configured algorithm. Squared errors
//! are averaged pointwise over runs, in run order, so the result does not
//! depend on how runs are scheduled across threads.
//!
//! Per-run seeds come from [`run_seeds`]:
//!
//! ```text
//! base   = splitmix64(master_seed ^ splitmix64(run))
//! signal = splitmix64(base ^ 1) ^ signal.seed
//! noise  = splitmix64(base ^ 2) ^ channel.seed
//! ```

use std::collections::HashSet;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{
    apply_channel, build_dataset, generate_input, ChannelConfig, Dataset, EmbeddingConfig,
    SignalConfig, CIRCULAR_RHO, DEFAULT_AMPLITUDE,
};
use crate::error::{Error, Result};
use crate::filters::{run_filter, FilterConfig, NoveltyConfig, DEFAULT_EPSILON};
use crate::kernel::KernelSpec;

/// Floor applied before converting an MSE to dB.
pub const DB_FLOOR: f64 = -120.0;

/// One algorithm entry of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSpec {
    /// Column label in the outputs; must be unique within an experiment.
    pub id: String,
    #[serde(flatten)]
    pub filter: FilterConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub signal: SignalConfig,
    #[serde(default)]
    pub channel: ChannelConfig,
    #[serde(default)]
    pub embedding: EmbeddingConfig,
    pub algorithms: Vec<AlgorithmSpec>,
    #[serde(default = "default_mc_runs")]
    pub mc_runs: usize,
    #[serde(default)]
    pub master_seed: u64,
    /// Trailing moving-average window applied to the dB curve; off when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smoothing_window: Option<usize>,
}

fn default_mc_runs() -> usize {
    100
}

impl ExperimentConfig {
    /// The benchmark setup: 5000 samples, `L = 5`, `D = 2`, 100 runs and
    /// three algorithms (kernel LMS with `σ = 5`, `μ = 1`, `δ₁ = 0.1`,
    /// `δ₂ = 0.2`; NCLMS and WL-NCLMS with `μ = 1/16`).
    ///
    /// The kernel LMS step is normalized by `κ(z, z)`; without it the filter
    /// diverges at `μ = 1` on this channel.
    pub fn benchmark(name: &str, rho: f64) -> Self {
        Self {
            name: name.to_owned(),
            signal: SignalConfig {
                rho,
                amplitude: DEFAULT_AMPLITUDE,
                n_samples: 5000,
                seed: 0,
            },
            channel: ChannelConfig::default(),
            embedding: EmbeddingConfig {
                filter_length: 5,
                delay: 2,
            },
            algorithms: vec![
                AlgorithmSpec {
                    id: "cklms".into(),
                    filter: FilterConfig::Cklms {
                        kernel: KernelSpec::complex_gaussian(5.0).expect("valid sigma"),
                        mu: 1.0,
                        novelty: NoveltyConfig::new(0.1, 0.2).expect("valid thresholds"),
                        normalize: true,
                    },
                },
                AlgorithmSpec {
                    id: "nclms".into(),
                    filter: FilterConfig::Nclms {
                        mu: 1.0 / 16.0,
                        epsilon: DEFAULT_EPSILON,
                    },
                },
                AlgorithmSpec {
                    id: "wl_nclms".into(),
                    filter: FilterConfig::WlNclms {
                        mu: 1.0 / 16.0,
                        epsilon: DEFAULT_EPSILON,
                    },
                },
            ],
            mc_runs: 100,
            master_seed: 2010,
            smoothing_window: None,
        }
    }

    pub fn circular() -> Self {
        Self::benchmark("circular", CIRCULAR_RHO)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::invalid("experiment name must not be empty"));
        }
        if self.mc_runs == 0 {
            return Err(Error::invalid("mc_runs must be at least 1"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::invalid("at least one algorithm is required"));
        }
        let mut seen = HashSet::new();
        for alg in &self.algorithms {
            if !seen.insert(alg.id.as_str()) {
                return Err(Error::invalid(format!(
                    "duplicate algorithm id `{}`",
                    alg.id
                )));
            }
            if alg.id.is_empty() || alg.id.contains([',', '\n', '"']) {
                return Err(Error::invalid(format!(
                    "algorithm id `{}` is not a valid label",
                    alg.id
                )));
            }
            alg.filter.build(self.embedding.dim())?;
        }
        if self.smoothing_window == Some(0) {
            return Err(Error::invalid("smoothing_window must be at least 1"));
        }
        self.signal.validate()?;
        self.channel.validate()?;
        if self.signal.n_samples <= self.embedding.filter_length + self.embedding.delay {
            return Err(Error::invalid(format!(
                "signal.n_samples = {} is too short for L = {}, D = {}",
                self.signal.n_samples, self.embedding.filter_length, self.embedding.delay
            )));
        }
        Ok(())
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `(signal seed, noise seed)` for Monte-Carlo run `run`.
pub fn run_seeds(master_seed: u64, run: usize) -> (u64, u64) {
    let base = splitmix64(master_seed ^ splitmix64(run as u64));
    (splitmix64(base ^ 1), splitmix64(base ^ 2))
}

/// One Monte-Carlo realization of the benchmark data.
#[derive(Debug, Clone)]
pub struct Realization {
    pub transmitted: Vec<Complex64>,
    pub dataset: Dataset,
    /// `None` for a noiseless channel.
    pub snr_db: Option<f64>,
}

/// Generates the signal, channel output and dataset of run `run`.
pub fn realize(cfg: &ExperimentConfig, run: usize) -> Result<Realization> {
    let (signal_seed, noise_seed) = run_seeds(cfg.master_seed, run);
    let signal = SignalConfig {
        seed: signal_seed ^ cfg.signal.seed,
        ..cfg.signal.clone()
    };
    let channel = ChannelConfig {
        seed: noise_seed ^ cfg.channel.seed,
        ..cfg.channel.clone()
    };
    let s = generate_input(&signal)?;
    let out = apply_channel(&s, &channel)?;
    let snr_db = (out.noise_power > 0.0).then(|| out.snr_db());
    let dataset = build_dataset(&out.received, &s, &cfg.embedding)?;
    Ok(Realization {
        transmitted: s,
        dataset,
        snr_db,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DictionaryStats {
    /// Final dictionary size of every run, in run order.
    pub final_sizes: Vec<usize>,
    /// Dictionary size after each iteration, averaged over runs.
    pub mean_size: Vec<f64>,
    /// Whether every run's size trace was non-decreasing with unit steps.
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningCurve {
    pub algorithm: String,
    /// `|e(n)|²` averaged over runs.
    pub mse: Vec<f64>,
    /// `10 log₁₀` of the (optionally smoothed) MSE, floored at [`DB_FLOOR`].
    pub mse_db: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dictionary: Option<DictionaryStats>,
}

impl LearningCurve {
    pub fn len(&self) -> usize {
        self.mse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mse.is_empty()
    }

    /// `10 log₁₀` of the mean MSE over the last `window` iterations.
    pub fn steady_state_db(&self, window: usize) -> f64 {
        let window = window.clamp(1, self.mse.len().max(1));
        let tail = &self.mse[self.mse.len().saturating_sub(window)..];
        to_db(tail.iter().sum::<f64>() / tail.len() as f64)
    }

    /// Mean MSE in dB over iterations `range` (0-based).
    pub fn segment_db(&self, range: std::ops::Range<usize>) -> f64 {
        let seg = &self.mse[range];
        to_db(seg.iter().sum::<f64>() / seg.len() as f64)
    }
}

pub fn to_db(mse: f64) -> f64 {
    if mse > 0.0 {
        (10.0 * mse.log10()).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}

fn moving_average(x: &[f64], window: usize) -> Vec<f64> {
    let mut acc = 0.0;
    x.iter()
        .enumerate()
        .map(|(n, v)| {
            acc += v;
            if n >= window {
                acc -= x[n - window];
            }
            acc / (n + 1).min(window) as f64
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub dataset_len: usize,
    pub regressor_dim: usize,
    /// Realized SNR of each run, absent for a noiseless channel.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr_db: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_snr_db: Option<f64>,
    /// Wall-clock seconds; only recorded on request since it breaks
    /// byte-identical output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub curves: Vec<LearningCurve>,
    pub metadata: Metadata,
}

impl ExperimentResult {
    pub fn curve(&self, id: &str) -> Option<&LearningCurve> {
        self.curves.iter().find(|c| c.algorithm == id)
    }
}

struct RunOutput {
    snr_db: Option<f64>,
    squared_errors: Vec<Vec<f64>>,
    dict_sizes: Vec<Option<Vec<usize>>>,
}

fn single_run(cfg: &ExperimentConfig, run: usize) -> Result<RunOutput> {
    let real = realize(cfg, run)?;
    let mut squared_errors = Vec::with_capacity(cfg.algorithms.len());
    let mut dict_sizes = Vec::with_capacity(cfg.algorithms.len());
    for alg in &cfg.algorithms {
        let out = run_filter(real.dataset.pairs(), &alg.filter).map_err(|e| Error::InRun {
            run,
            algorithm: alg.id.clone(),
            source: Box::new(e),
        })?;
        squared_errors.push(out.records.iter().map(|r| r.squared_error).collect());
        dict_sizes.push(
            out.final_state
                .as_cklms()
                .map(|_| out.records.iter().map(|r| r.dict_size).collect()),
        );
    }
    Ok(RunOutput {
        snr_db: real.snr_db,
        squared_errors,
        dict_sizes,
    })
}

/// Runs every Monte-Carlo realization and averages the learning curves.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let runs: Vec<RunOutput> = (0..cfg.mc_runs)
        .into_par_iter()
        .map(|run| single_run(cfg, run))
        .collect::<Result<_>>()?;

    let len = runs[0].squared_errors[0].len();
    let n_runs = runs.len() as f64;
    let mut curves = Vec::with_capacity(cfg.algorithms.len());
    for (a, alg) in cfg.algorithms.iter().enumerate() {
        let mut sum = vec![0.0; len];
        for run in &runs {
            for (acc, v) in sum.iter_mut().zip(&run.squared_errors[a]) {
                *acc += v;
            }
        }
        let mse: Vec<f64> = sum.into_iter().map(|s| s / n_runs).collect();
        let shown = match cfg.smoothing_window {
            Some(w) if w > 1 => moving_average(&mse, w),
            _ => mse.clone(),
        };
        let mse_db = shown.iter().map(|&v| to_db(v)).collect();

        let dictionary = runs[0].dict_sizes[a].as_ref().map(|_| {
            let mut mean = vec![0.0; len];
            let mut final_sizes = Vec::with_capacity(runs.len());
            let mut monotone = true;
            for run in &runs {
                let sizes = run.dict_sizes[a]
                    .as_ref()
                    .expect("same algorithm in every run");
                let mut prev = 0;
                for (m, &s) in mean.iter_mut().zip(sizes) {
                    *m += s as f64;
                    monotone &= s >= prev && s - prev <= 1;
                    prev = s;
                }
                final_sizes.push(sizes.last().copied().unwrap_or(0));
            }
            mean.iter_mut().for_each(|m| *m /= n_runs);
            DictionaryStats {
                final_sizes,
                mean_size: mean,
                monotone,
            }
        });

        curves.push(LearningCurve {
            algorithm: alg.id.clone(),
            mse,
            mse_db,
            dictionary,
        });
    }

    let snr: Option<Vec<f64>> = runs.iter().map(|r| r.snr_db).collect();
    let mean_snr_db = snr.as_ref().map(|v| v.iter().sum::<f64>() / v.len() as f64);
    let metadata = Metadata {
        dataset_len: len,
        regressor_dim: cfg.embedding.dim(),
        snr_db: snr,
        mean_snr_db,
        elapsed_seconds: None,
    };
    Ok(ExperimentResult {
        config: cfg.clone(),
        curves,
        metadata,
    })
}

/// Like [`run_experiment`] but records wall-clock time in the metadata.
pub fn run_experiment_timed(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let started = std::time::Instant::now();
    let mut result = run_experiment(cfg)?;
    result.metadata.elapsed_seconds = Some(started.elapsed().as_secs_f64());
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(n: usize, algorithms: Vec<AlgorithmSpec>) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::circular();
        cfg.signal.n_samples = n;
        cfg.mc_runs = 2;
        cfg.algorithms = algorithms;
        cfg
    }

    fn nclms() -> AlgorithmSpec {
        AlgorithmSpec {
            id: "nclms".into(),
            filter: FilterConfig::Nclms {
                mu: 0.0625,
                epsilon: DEFAULT_EPSILON,
            },
        }
    }

    #[test]
    fn curve_length_matches_dataset() {
        let mut cfg = tiny(10, vec![nclms()]);
        cfg.mc_runs = 1;
        let res = run_experiment(&cfg).unwrap();
        // n ∈ [L−D, N−1−D] = [3, 7]
        assert_eq!(res.curves[0].len(), 5);
        assert_eq!(res.metadata.dataset_len, 5);
        assert!(res.curves[0].dictionary.is_none());
    }

    #[test]
    fn validation_errors() {
        let mut cfg = tiny(100, vec![nclms(), nclms()]);
        assert!(run_experiment(&cfg).is_err());
        cfg.algorithms.pop();
        cfg.mc_runs = 0;
        assert!(run_experiment(&cfg).is_err());
        cfg.mc_runs = 1;
        cfg.signal.n_samples = 7;
        assert!(run_experiment(&cfg).is_err());
        cfg.signal.n_samples = 100;
        cfg.signal.rho = 2.0;
        assert!(run_experiment(&cfg).is_err());
    }

    #[test]
    fn seeds_differ_per_run_and_stream() {
        let (a, b) = run_seeds(7, 0);
        let (c, d) = run_seeds(7, 1);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_ne!(b, d);
        assert_eq!(run_seeds(7, 1), (c, d));
    }

    #[test]
    fn moving_average_window() {
        assert_eq!(
            moving_average(&[1.0, 3.0, 5.0, 7.0], 2),
            vec![1.0, 2.0, 4.0, 6.0]
        );
        assert_eq!(moving_average(&[2.0, 4.0], 1), vec![2.0, 4.0]);
    }

    #[test]
    fn db_floor() {
        assert_eq!(to_db(0.0), DB_FLOOR);
        assert_eq!(to_db(1e-30), DB_FLOOR);
        assert!((to_db(0.1) + 10.0).abs() < 1e-12);
    }
}
