//! Run manifests: everything needed to reproduce an output file.
//!
//! A manifest is written next to each output CSV as `<out>.manifest.toml`
//! and embeds the fully resolved problem config, so feeding the manifest
//! back through `--config` reproduces the run.

use std::path::Path;

use serde::{Deserialize, Serialize};

use lamina::config::Config;

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSection {
    pub times: Vec<f64>,
    pub points_per_layer: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergeSection {
    pub n_list: Vec<usize>,
    pub reference: String,
    pub classical_terms: usize,
    pub fdm_divisions: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareSection {
    pub fdm_divisions: usize,
    pub fdm_dt: f64,
    /// Post-rescale exponent (`c = e^{rate t} u`); 0 when none.
    pub rescale_rate: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub out: String,
    pub grid: GridSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converge: Option<ConvergeSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compare: Option<CompareSection>,
    pub problem: Config,
}

/// Write `<out>.manifest.toml` next to the output file.
pub fn write(out: &Path, manifest: &Manifest) -> Result<(), CliError> {
    let path = manifest_path(out);
    let text =
        toml::to_string_pretty(manifest).map_err(|e| CliError::Runtime(e.to_string()))?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn manifest_path(out: &Path) -> std::path::PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.toml");
    out.with_file_name(name)
}

/// Accept either a plain config or a previously emitted manifest.
pub fn config_from_text(text: &str) -> Result<Config, CliError> {
    if let Ok(manifest) = toml::from_str::<Manifest>(text) {
        return Ok(manifest.problem);
    }
    Ok(Config::from_toml(text)?)
}
