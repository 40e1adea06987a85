//! Run manifest: config hash, input checksums and tool version.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::PipelineConfig;
use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const ERROR_MANIFEST_FILE: &str = "error_manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub config_sha256: String,
    /// Input role → SHA-256 of the file contents.
    pub inputs: BTreeMap<String, String>,
    /// Output file name (relative to the output directory) → SHA-256.
    pub outputs: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorManifest {
    pub stage: String,
    pub error: String,
    pub completed: Vec<String>,
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

pub fn config_hash(cfg: &PipelineConfig) -> Result<String> {
    Ok(hex::encode(Sha256::digest(cfg.to_toml_string()?.as_bytes())))
}

pub fn build_manifest(cfg: &PipelineConfig, outputs: &[&Path]) -> Result<RunManifest> {
    let inputs = cfg
        .input_files()
        .into_iter()
        .map(|(role, p)| Ok((role.to_owned(), sha256_file(p)?)))
        .collect::<Result<_>>()?;
    let outputs = outputs
        .iter()
        .map(|p| {
            let rel = p
                .strip_prefix(&cfg.output_dir)
                .unwrap_or(p)
                .to_string_lossy()
                .replace('\\', "/");
            Ok((rel, sha256_file(p)?))
        })
        .collect::<Result<_>>()?;
    Ok(RunManifest {
        tool: env!("CARGO_PKG_NAME").to_owned(),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        config_sha256: config_hash(cfg)?,
        inputs,
        outputs,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Invalid(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

/// Inputs whose current checksum differs from the manifest.
pub fn changed_inputs(cfg: &PipelineConfig, manifest: &RunManifest) -> Result<Vec<String>> {
    let mut changed = Vec::new();
    for (role, p) in cfg.input_files() {
        if manifest.inputs.get(role) != Some(&sha256_file(p)?) {
            changed.push(role.to_owned());
        }
    }
    Ok(changed)
}
