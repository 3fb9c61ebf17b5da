//! TOML experiment files.
//!
//! A file holds one or more `[[experiment]]` tables, each deserializing to an
//! [`ExperimentConfig`]. Unknown keys are rejected.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use cklms_core::experiment::ExperimentConfig;
use serde::Deserialize;

use crate::CliError;

/// The bundled benchmark configuration (circular and non-circular inputs).
pub const DEFAULT_CONFIG: &str = include_str!("../configs/default.toml");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    experiment: Vec<ExperimentConfig>,
}

pub fn parse(text: &str, origin: &Path) -> Result<Vec<ExperimentConfig>, CliError> {
    let file: ConfigFile = toml::from_str(text).map_err(|source| CliError::ParseConfig {
        path: origin.to_path_buf(),
        source: Box::new(source),
    })?;
    if file.experiment.is_empty() {
        return Err(CliError::Config {
            path: origin.to_path_buf(),
            message: "no [[experiment]] tables".into(),
        });
    }
    let mut names = HashSet::new();
    for exp in &file.experiment {
        exp.validate().map_err(|e| CliError::Config {
            path: origin.to_path_buf(),
            message: format!("experiment `{}`: {e}", exp.name),
        })?;
        if !exp
            .name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
        {
            return Err(CliError::Config {
                path: origin.to_path_buf(),
                message: format!(
                    "experiment name `{}` must use only letters, digits, `-`, `_` and `.`",
                    exp.name
                ),
            });
        }
        if !names.insert(exp.name.as_str()) {
            return Err(CliError::Config {
                path: origin.to_path_buf(),
                message: format!("experiment name `{}` appears twice", exp.name),
            });
        }
    }
    Ok(file.experiment)
}

/// Reads `path`, or the bundled default when `path` is `None`.
pub fn load(path: Option<&Path>) -> Result<Vec<ExperimentConfig>, CliError> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| CliError::ReadConfig {
                path: p.to_path_buf(),
                source,
            })?;
            parse(&text, p)
        }
        None => parse(DEFAULT_CONFIG, &PathBuf::from("<bundled default.toml>")),
    }
}
