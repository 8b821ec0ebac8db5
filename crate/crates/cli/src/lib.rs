//! Batch experiment runner for `hardy-disc-core`: reads a `key = value`
//! configuration, runs one scenario and writes `<scenario>.csv` and
//! `<scenario>.json`.

pub mod config;
pub mod error;
pub mod record;
pub mod scenario;

use std::fs;
use std::path::{Path, PathBuf};

pub use config::{parse_config, ExperimentConfig, Preset, Scenario};
pub use error::{CliError, Result};
pub use record::{Check, ResultRecord, Table};
pub use scenario::run;

/// Writes `<scenario>.csv` and `<scenario>.json` into `dir` and returns
/// their paths.
pub fn write_outputs(
    dir: &Path,
    record: &ResultRecord,
    table: &Table,
) -> Result<(PathBuf, PathBuf)> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let csv = dir.join(format!("{}.csv", record.scenario));
    let json = dir.join(format!("{}.json", record.scenario));
    fs::write(&csv, table.to_csv()).map_err(io(&csv))?;
    let mut text = serde_json::to_string_pretty(record)?;
    text.push('\n');
    fs::write(&json, text).map_err(io(&json))?;
    Ok((csv, json))
}
