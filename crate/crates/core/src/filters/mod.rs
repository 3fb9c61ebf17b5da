//! Online filters and the sequential driver that feeds them samples.

mod cklms;
mod linear;

pub use cklms::{CklmsSnapshot, CklmsState, Dictionary, NoveltyConfig};
pub use linear::{Nclms, WlNclms, DEFAULT_EPSILON};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::KernelSpec;
use crate::vector::ComplexVector;

/// Outcome of processing one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub prediction: Complex64,
    pub error: Complex64,
    pub squared_error: f64,
    /// Whether the sample entered the dictionary (always true for linear filters).
    pub admitted: bool,
    /// Dictionary size after the step (zero for linear filters).
    pub dict_size: usize,
}

impl StepRecord {
    pub(crate) fn new(
        prediction: Complex64,
        error: Complex64,
        admitted: bool,
        dict_size: usize,
    ) -> Self {
        Self {
            prediction,
            error,
            squared_error: error.norm_sqr(),
            admitted,
            dict_size,
        }
    }
}

pub(crate) fn check_finite(z: &ComplexVector, d: Complex64) -> Result<()> {
    if !z.is_finite() {
        return Err(Error::Numeric("non-finite regressor component".into()));
    }
    if !d.is_finite() {
        return Err(Error::Numeric("non-finite desired response".into()));
    }
    Ok(())
}

/// Which filter to run and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FilterConfig {
    Cklms {
        kernel: KernelSpec,
        mu: f64,
        novelty: NoveltyConfig,
        #[serde(default)]
        normalize: bool,
    },
    Nclms {
        mu: f64,
        #[serde(default = "default_epsilon")]
        epsilon: f64,
    },
    WlNclms {
        mu: f64,
        #[serde(default = "default_epsilon")]
        epsilon: f64,
    },
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

impl FilterConfig {
    pub fn name(&self) -> &'static str {
        match self {
            FilterConfig::Cklms { .. } => "cklms",
            FilterConfig::Nclms { .. } => "nclms",
            FilterConfig::WlNclms { .. } => "wl_nclms",
        }
    }

    pub fn mu(&self) -> f64 {
        match *self {
            FilterConfig::Cklms { mu, .. }
            | FilterConfig::Nclms { mu, .. }
            | FilterConfig::WlNclms { mu, .. } => mu,
        }
    }

    /// Creates a fresh filter for regressors of length `dim`.
    pub fn build(&self, dim: usize) -> Result<FilterState> {
        let mu = self.mu();
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::invalid(format!(
                "step size mu must be positive, got {mu}"
            )));
        }
        Ok(match *self {
            FilterConfig::Cklms {
                kernel,
                mu,
                novelty,
                normalize,
            } => FilterState::Cklms(CklmsState::new(kernel, mu, novelty)?.normalized(normalize)),
            FilterConfig::Nclms { mu, epsilon } => FilterState::Nclms {
                filter: Nclms::new(dim, epsilon)?,
                mu,
            },
            FilterConfig::WlNclms { mu, epsilon } => FilterState::WlNclms {
                filter: WlNclms::new(dim, epsilon)?,
                mu,
            },
        })
    }
}

#[derive(Debug, Clone)]
pub enum FilterState {
    Cklms(CklmsState),
    Nclms { filter: Nclms, mu: f64 },
    WlNclms { filter: WlNclms, mu: f64 },
}

impl FilterState {
    pub fn step(&mut self, z: &ComplexVector, d: Complex64) -> Result<StepRecord> {
        match self {
            FilterState::Cklms(s) => s.step(z, d),
            FilterState::Nclms { filter, mu } => filter.step(z, d, *mu),
            FilterState::WlNclms { filter, mu } => filter.step(z, d, *mu),
        }
    }

    pub fn predict(&self, z: &ComplexVector) -> Result<Complex64> {
        match self {
            FilterState::Cklms(s) => s.predict(z),
            FilterState::Nclms { filter, .. } => filter.predict(z),
            FilterState::WlNclms { filter, .. } => filter.predict(z),
        }
    }

    pub fn as_cklms(&self) -> Option<&CklmsState> {
        match self {
            FilterState::Cklms(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FilterRun {
    pub records: Vec<StepRecord>,
    pub final_state: FilterState,
}

/// Runs a filter over `samples` in order, one record per sample.
///
/// Errors carry the 1-based index of the failing sample.
pub fn run_filter<'a, I>(samples: I, config: &FilterConfig) -> Result<FilterRun>
where
    I: IntoIterator<Item = (&'a ComplexVector, Complex64)>,
{
    let mut samples = samples.into_iter().peekable();
    let dim = samples
        .peek()
        .map(|(z, _)| z.len())
        .ok_or_else(|| Error::invalid("no samples to filter"))?;
    let mut state = config.build(dim)?;
    let (lower, _) = samples.size_hint();
    let mut records = Vec::with_capacity(lower);
    for (index, (z, d)) in samples.enumerate() {
        let rec = state.step(z, d).map_err(|e| e.at_step(index + 1))?;
        if !rec.squared_error.is_finite() {
            return Err(Error::Numeric("filter output diverged".into()).at_step(index + 1));
        }
        records.push(rec);
    }
    Ok(FilterRun {
        records,
        final_state: state,
    })
}
