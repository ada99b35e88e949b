use std::fs;
use std::path::{Path, PathBuf};

use dcode_core::{CliConfig, RunRecord};
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::runtime(format!("{}: {e}", dir.display())))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<PathBuf> {
    fs::write(path, text).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    Ok(path.to_path_buf())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<PathBuf> {
    let text = serde_json::to_string_pretty(value).map_err(CliError::runtime)? + "\n";
    write_text(path, &text)
}

pub fn write_effective_config(dir: &Path, cfg: &CliConfig) -> CliResult<PathBuf> {
    write_json(&dir.join("effective_config.json"), cfg)
}

/// Per-iteration trajectory with the live parameters when recorded.
pub fn write_run_csv(path: &Path, record: &RunRecord) -> CliResult<PathBuf> {
    let err = |e: csv::Error| CliError::runtime(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(["iteration", "best_cost", "efficiency", "rho", "ants"]).map_err(err)?;
    for (i, cost) in record.best_cost_per_iteration.iter().enumerate() {
        let p = record.params.get(i);
        w.write_record([
            (i + 1).to_string(),
            format!("{cost:?}"),
            p.and_then(|p| p.efficiency).map(|e| format!("{e:?}")).unwrap_or_default(),
            p.map(|p| format!("{:?}", p.rho)).unwrap_or_default(),
            p.map(|p| p.ants.to_string()).unwrap_or_default(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    Ok(path.to_path_buf())
}

pub fn load_config(path: Option<&Path>) -> CliResult<CliConfig> {
    match path {
        Some(p) => Ok(CliConfig::load(p).map_err(CliError::config)?),
        None => Ok(CliConfig::default()),
    }
}
