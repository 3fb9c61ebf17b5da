//! CSV and JSON output of experiment results.
//!
//! CSV: header `iteration,<id>_mse_db,…`, one row per iteration (1-based),
//! values written with the shortest representation that round-trips.
//!
//! JSON: pretty-printed document with top-level keys `config`, `curves` and
//! `metadata` (see [`ExperimentResult`]). Parsing and re-emitting a document
//! reproduces it byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::ExperimentResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::invalid(format!("unknown output format `{other}`"))),
        }
    }
}

pub fn to_csv(result: &ExperimentResult) -> Result<String> {
    if result.curves.is_empty() {
        return Err(Error::invalid("no curves to write"));
    }
    let mut out = String::from("iteration");
    for curve in &result.curves {
        write!(out, ",{}_mse_db", curve.algorithm).expect("writing to a String");
    }
    out.push('\n');
    let len = result.curves[0].mse_db.len();
    for n in 0..len {
        write!(out, "{}", n + 1).expect("writing to a String");
        for curve in &result.curves {
            write!(out, ",{}", curve.mse_db[n]).expect("writing to a String");
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn to_json(result: &ExperimentResult) -> Result<String> {
    if result.curves.is_empty() {
        return Err(Error::invalid("no curves to write"));
    }
    let mut s = serde_json::to_string_pretty(result)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(text: &str) -> Result<ExperimentResult> {
    Ok(serde_json::from_str(text)?)
}

/// Writes `result` to `path` in the requested format.
pub fn emit_results(result: &ExperimentResult, format: OutputFormat, path: &Path) -> Result<()> {
    let text = match format {
        OutputFormat::Csv => to_csv(result)?,
        OutputFormat::Json => to_json(result)?,
    };
    fs::write(path, text).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("cannot write {}: {e}", path.display()),
        ))
    })
}
