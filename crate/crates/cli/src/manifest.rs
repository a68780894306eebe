//! Run manifests: a JSON record written alongside every file-producing
//! run, holding the command line, the resolved configuration, the tool
//! version, the wall-clock duration, and the output paths.
//!
//! The configuration snapshot is complete: `plane --from-manifest` rebuilds
//! the run from it and reproduces byte-identical PPM/CSV outputs (the
//! manifest itself differs only in its duration field).

use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    /// The argv of the run that produced this manifest.
    pub command: Vec<String>,
    /// `fracroot-cli` package version.
    pub tool_version: String,
    /// Wall-clock duration of the run in seconds (informational; varies
    /// between otherwise identical runs).
    pub duration_seconds: f64,
    /// Files the run wrote, in the order written.
    pub outputs: Vec<String>,
    /// Complete resolved configuration.
    pub config: ConfigSnapshot,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConfigSnapshot {
    Solve(SolveSnapshot),
    Plane(PlaneSnapshot),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SolveSnapshot {
    pub method: String,
    /// The resolved function model as model JSON (not the file path, so
    /// the snapshot survives file moves).
    pub function: serde_json::Value,
    pub alpha: f64,
    pub x0: [f64; 2],
    pub base: f64,
    pub max_iterations: usize,
    pub step_tol: f64,
    pub residual_tol: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PlaneSnapshot {
    pub method: String,
    pub function: serde_json::Value,
    pub axis: String,
    pub lo: f64,
    pub hi: f64,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub nx: usize,
    pub nalpha: usize,
    pub roots: Vec<[f64; 2]>,
    pub match_tol: f64,
    pub base: f64,
    pub max_iterations: usize,
    pub step_tol: f64,
    pub residual_tol: f64,
    pub out_prefix: String,
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<(), String> {
        let mut body = serde_json::to_string_pretty(self)
            .map_err(|e| format!("cannot serialize manifest: {e}"))?;
        body.push('\n');
        fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display()))
    }

    pub fn read(path: &Path) -> Result<Self, String> {
        let body =
            fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&body)
            .map_err(|e| format!("{} is not a valid run manifest: {e}", path.display()))
    }
}
