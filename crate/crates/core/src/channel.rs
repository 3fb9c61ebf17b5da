//! Synthetic data for the nonlinear channel-equalization benchmark.
//!
//! Transmitted signal:
//!
//! ```text
//! s(n) = A (√(1−ρ²) X(n) + i ρ Y(n)),   X, Y ~ N(0, 1) independent
//! ```
//!
//! Channel (default taps and coefficients):
//!
//! ```text
//! t(n) = (−0.9+0.8i) s(n) + (0.6−0.7i) s(n−1)
//! q(n) = t(n) + (0.1+0.15i) t(n)² + (0.06+0.05i) t(n)³
//! r(n) = q(n) + v(n),   v circular white Gaussian
//! ```
//!
//! Indices are 0-based and `s(n) = 0` for `n < 0`.
//!
//! The equalizer is trained on pairs `((r(n+D), r(n+D−1), …, r(n+D−L)), s(n))`
//! for every `n` whose regressor lies fully inside the received block, i.e.
//! `max(0, L−D) ≤ n ≤ N−1−D`. Pair `k` of a [`Dataset`] corresponds to
//! `n = indices[k]` (1-based time `n + 1`).

use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::ComplexVector;

/// `ρ` giving a circular input.
pub const CIRCULAR_RHO: f64 = std::f64::consts::FRAC_1_SQRT_2;
/// `ρ` used for the non-circular scenario.
pub const NON_CIRCULAR_RHO: f64 = 0.1;
pub const DEFAULT_AMPLITUDE: f64 = 0.70;
pub const DEFAULT_SNR_DB: f64 = 15.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalConfig {
    pub rho: f64,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    pub n_samples: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_amplitude() -> f64 {
    DEFAULT_AMPLITUDE
}

impl SignalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::invalid(format!(
                "signal.rho must lie in [0, 1], got {}",
                self.rho
            )));
        }
        if !self.amplitude.is_finite() {
            return Err(Error::invalid("signal.amplitude must be finite"));
        }
        if self.n_samples == 0 {
            return Err(Error::invalid("signal.n_samples must be at least 1"));
        }
        Ok(())
    }
}

/// Additive noise level: either a fixed per-component standard deviation or
/// a target SNR measured against the noise-free channel output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseLevel {
    Stddev(f64),
    SnrDb(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    #[serde(default = "default_taps")]
    pub linear_taps: Vec<Complex64>,
    /// Coefficients of `t²`, `t³`, … in the memoryless nonlinearity.
    #[serde(default = "default_poly")]
    pub poly_coeffs: Vec<Complex64>,
    #[serde(default = "default_noise")]
    pub noise: NoiseLevel,
    #[serde(default)]
    pub seed: u64,
}

fn default_taps() -> Vec<Complex64> {
    vec![Complex64::new(-0.9, 0.8), Complex64::new(0.6, -0.7)]
}

fn default_poly() -> Vec<Complex64> {
    vec![Complex64::new(0.1, 0.15), Complex64::new(0.06, 0.05)]
}

fn default_noise() -> NoiseLevel {
    NoiseLevel::SnrDb(DEFAULT_SNR_DB)
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self {
            linear_taps: default_taps(),
            poly_coeffs: default_poly(),
            noise: default_noise(),
            seed: 0,
        }
    }
}

impl ChannelConfig {
    pub fn noiseless() -> Self {
        Self {
            noise: NoiseLevel::Stddev(0.0),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.linear_taps.is_empty() {
            return Err(Error::invalid("channel.linear_taps needs at least one tap"));
        }
        match self.noise {
            NoiseLevel::Stddev(s) if !(s >= 0.0 && s.is_finite()) => Err(Error::invalid(format!(
                "channel.noise.stddev must be finite and nonnegative, got {s}"
            ))),
            NoiseLevel::SnrDb(db) if !db.is_finite() => {
                Err(Error::invalid("channel.noise.snr_db must be finite"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingConfig {
    /// `L`: the regressor holds `L + 1` received samples.
    #[serde(default = "default_filter_length")]
    pub filter_length: usize,
    /// `D`: equalization delay.
    #[serde(default = "default_delay")]
    pub delay: usize,
}

fn default_filter_length() -> usize {
    5
}

fn default_delay() -> usize {
    2
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        Self {
            filter_length: default_filter_length(),
            delay: default_delay(),
        }
    }
}

impl EmbeddingConfig {
    pub fn dim(&self) -> usize {
        self.filter_length + 1
    }
}

/// Draws the transmitted sequence `s`.
pub fn generate_input(cfg: &SignalConfig) -> Result<Vec<Complex64>> {
    cfg.validate()?;
    let re_scale = cfg.amplitude * (1.0 - cfg.rho * cfg.rho).sqrt();
    let im_scale = cfg.amplitude * cfg.rho;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok((0..cfg.n_samples)
        .map(|_| {
            let x: f64 = rng.sample(StandardNormal);
            let y: f64 = rng.sample(StandardNormal);
            Complex64::new(re_scale * x, im_scale * y)
        })
        .collect())
}

/// Received block together with the noise actually applied.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelOutput {
    pub received: Vec<Complex64>,
    /// Per-component noise standard deviation used.
    pub noise_stddev: f64,
    /// Mean `|q(n)|²` of the noise-free output.
    pub clean_power: f64,
    /// Mean `|v(n)|²` of the noise realization.
    pub noise_power: f64,
}

impl ChannelOutput {
    /// Realized SNR in dB; infinite for a noiseless channel.
    pub fn snr_db(&self) -> f64 {
        10.0 * (self.clean_power / self.noise_power).log10()
    }
}

/// Noise-free channel output `q(n)` (linear filter, then polynomial).
pub fn channel_clean(s: &[Complex64], cfg: &ChannelConfig) -> Result<Vec<Complex64>> {
    cfg.validate()?;
    if s.is_empty() {
        return Err(Error::invalid("channel input is empty"));
    }
    Ok((0..s.len())
        .map(|n| {
            let t = cfg
                .linear_taps
                .iter()
                .enumerate()
                .take(n + 1)
                .fold(Complex64::new(0.0, 0.0), |acc, (k, h)| acc + h * s[n - k]);
            nonlinearity(t, &cfg.poly_coeffs)
        })
        .collect())
}

/// `t + Σₖ cₖ t^(k+2)`.
#[inline]
fn nonlinearity(t: Complex64, poly: &[Complex64]) -> Complex64 {
    let mut out = t;
    let mut power = t;
    for c in poly {
        power *= t;
        out += c * power;
    }
    out
}

/// Passes `s` through the channel and adds circular white Gaussian noise.
pub fn apply_channel(s: &[Complex64], cfg: &ChannelConfig) -> Result<ChannelOutput> {
    let clean = channel_clean(s, cfg)?;
    let clean_power = mean_power(&clean);
    let noise_stddev = match cfg.noise {
        NoiseLevel::Stddev(sd) => sd,
        NoiseLevel::SnrDb(db) => (clean_power / 10f64.powf(db / 10.0) / 2.0).sqrt(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut noise_energy = 0.0;
    let received = clean
        .into_iter()
        .map(|q| {
            if noise_stddev == 0.0 {
                return q;
            }
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let v = Complex64::new(re, im) * noise_stddev;
            noise_energy += v.norm_sqr();
            q + v
        })
        .collect::<Vec<_>>();
    Ok(ChannelOutput {
        noise_power: noise_energy / received.len() as f64,
        received,
        noise_stddev,
        clean_power,
    })
}

fn mean_power(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>() / x.len() as f64
}

/// Delay-embedded training pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub inputs: Vec<ComplexVector>,
    pub targets: Vec<Complex64>,
    /// Time index `n` (0-based) of each pair.
    pub indices: Vec<usize>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.inputs.first().map_or(0, ComplexVector::len)
    }

    pub fn pairs(&self) -> impl ExactSizeIterator<Item = (&ComplexVector, Complex64)> + '_ {
        self.inputs.iter().zip(self.targets.iter().copied())
    }

    /// Writes the dataset as CSV with header
    /// `n,x0_re,x0_im,…,xL_re,xL_im,target_re,target_im`, where `xj` is
    /// `r(n+D−j)` and `n` is 0-based.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let mut header = String::from("n");
        for j in 0..self.dim() {
            header.push_str(&format!(",x{j}_re,x{j}_im"));
        }
        header.push_str(",target_re,target_im");
        writeln!(out, "{header}")?;
        for ((z, d), n) in self.pairs().zip(&self.indices) {
            write!(out, "{n}")?;
            for c in z.as_slice() {
                write!(out, ",{},{}", c.re, c.im)?;
            }
            writeln!(out, ",{},{}", d.re, d.im)?;
        }
        Ok(())
    }
}

/// Builds `((r(n+D), …, r(n+D−L)), s(n))` pairs.
pub fn build_dataset(r: &[Complex64], s: &[Complex64], cfg: &EmbeddingConfig) -> Result<Dataset> {
    if r.len() != s.len() {
        return Err(Error::DimensionMismatch {
            expected: s.len(),
            found: r.len(),
        });
    }
    let n_total = r.len();
    let (l, d) = (cfg.filter_length, cfg.delay);
    if n_total <= l + d {
        return Err(Error::invalid(format!(
            "need more than L + D = {} samples to embed, got {n_total}",
            l + d
        )));
    }
    let first = l.saturating_sub(d);
    let last = n_total - 1 - d;
    let inputs = (first..=last)
        .map(|n| ComplexVector::new((0..=l).map(|j| r[n + d - j]).collect()))
        .collect::<Result<Vec<_>>>()?;
    let targets = s[first..=last].to_vec();
    Ok(Dataset {
        inputs,
        targets,
        indices: (first..=last).collect(),
    })
}
