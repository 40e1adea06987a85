//! End-to-end orchestration: features → analysis → manifest.

pub mod analyze;
pub mod config;
pub mod features;
pub mod manifest;

use std::fs;
use std::path::{Path, PathBuf};

pub use analyze::{run_analyze, AnalyzeRun};
pub use config::{BetweennessMode, PipelineConfig};
pub use features::{run_features, FeatureRun, FEATURES_FILE};
pub use manifest::{build_manifest, RunManifest};

use crate::corpus::{load_messages, partition_weeks};
use crate::error::{Error, Result};
use manifest::{write_json, ErrorManifest, ERROR_MANIFEST_FILE, MANIFEST_FILE};

#[derive(Debug)]
pub struct RunOutcome {
    pub features: FeatureRun,
    pub analysis: AnalyzeRun,
    pub manifest: RunManifest,
}

/// Check that every input exists and the focal word survives filtering,
/// without writing anything.
pub fn dry_run(cfg: &PipelineConfig) -> Result<()> {
    cfg.validate()?;
    for (role, p) in cfg.input_files() {
        if !p.is_file() {
            return Err(Error::Config(format!("{role} input {} does not exist", p.display())));
        }
    }
    let pipeline = features::text_pipeline(cfg)?;
    features::focal_token(&pipeline, &cfg.network.focal_word)?;
    features::scorer(cfg)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestSummary {
    pub messages: usize,
    pub rejected: usize,
    pub in_horizon: usize,
    pub out_of_range: usize,
    pub comments: usize,
}

/// Load and window the messages and report counts.
pub fn ingest_check(cfg: &PipelineConfig) -> Result<(IngestSummary, Vec<crate::corpus::Rejection>)> {
    let loaded = load_messages(&cfg.inputs.messages, cfg.message_format())?;
    let corpus = partition_weeks(&loaded.messages, cfg.horizon.start, cfg.horizon.weeks)?;
    Ok((
        IngestSummary {
            messages: loaded.messages.len(),
            rejected: loaded.rejections.len(),
            in_horizon: corpus.message_count(),
            out_of_range: corpus.dropped,
            comments: loaded.messages.iter().filter(|m| m.is_comment()).count(),
        },
        loaded.rejections,
    ))
}

fn record_failure(cfg: &PipelineConfig, stage: &str, err: &Error, completed: &[PathBuf]) {
    let m = ErrorManifest {
        stage: stage.to_owned(),
        error: err.to_string(),
        completed: completed
            .iter()
            .map(|p| p.strip_prefix(&cfg.output_dir).unwrap_or(p).to_string_lossy().into_owned())
            .collect(),
    };
    if fs::create_dir_all(&cfg.output_dir).is_ok() {
        if let Err(e) = write_json(&cfg.output_dir.join(ERROR_MANIFEST_FILE), &m) {
            log::warn!("could not write error manifest: {e}");
        }
    }
}

/// `run_features` then `run_analyze`, then the manifest. On failure the
/// completed stages' files stay in place next to an error manifest.
pub fn run_all(cfg: &PipelineConfig) -> Result<RunOutcome> {
    let stale = cfg.output_dir.join(ERROR_MANIFEST_FILE);
    if stale.exists() {
        fs::remove_file(&stale).map_err(|e| Error::io(&stale, e))?;
    }
    let features = run_features(cfg).inspect_err(|e| record_failure(cfg, "features", e, &[]))?;
    let features_csv = cfg.output_dir.join(FEATURES_FILE);
    let analysis = run_analyze(cfg, &features_csv)
        .inspect_err(|e| record_failure(cfg, "analyze", e, &features.written))?;
    let outputs: Vec<&Path> = features
        .written
        .iter()
        .chain(&analysis.written)
        .map(PathBuf::as_path)
        .collect();
    let manifest = build_manifest(cfg, &outputs)?;
    write_json(&cfg.output_dir.join(MANIFEST_FILE), &manifest)?;
    Ok(RunOutcome {
        features,
        analysis,
        manifest,
    })
}
