use std::fs;
use std::path::{Path, PathBuf};

use super::config::PipelineConfig;
use super::features::read_features_csv;
use crate::corpus::{load_market_series, WeekGrid};
use crate::econometrics::{build_panel, report::write_report, run_battery, AnalysisReport};
use crate::error::{Error, Result};

pub const REPORT_DIR: &str = "report";

#[derive(Debug)]
pub struct AnalyzeRun {
    pub report: AnalysisReport,
    pub written: Vec<PathBuf>,
}

/// Read the feature table and market series, run the analysis battery and
/// write the report tables under `<output_dir>/report`.
pub fn run_analyze(cfg: &PipelineConfig, features_csv: &Path) -> Result<AnalyzeRun> {
    let features = read_features_csv(features_csv)?;
    let grid = WeekGrid::new(cfg.horizon.start, cfg.horizon.weeks)?;
    let price = load_market_series(&cfg.inputs.price, "price", Some(&grid))?;
    let control = load_market_series(&cfg.inputs.control, "control", Some(&grid))?;
    let panel = build_panel::<f64>(&features, &price, &control)?;
    let report = run_battery(&panel, &cfg.analysis)?;
    let dir = cfg.output_dir.join(REPORT_DIR);
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let written = write_report(&dir, &report)?;
    let errors: Vec<&String> = report
        .correlations
        .iter()
        .filter_map(|c| c.error.as_ref())
        .chain(report.granger.iter().filter_map(|g| g.error.as_ref()))
        .chain(report.models.iter().filter_map(|m| m.error.as_ref()))
        .collect();
    let cells = report.correlations.len() + report.granger.len() + report.models.len();
    if !errors.is_empty() && errors.len() == cells {
        return Err(Error::NothingEstimable(errors[0].clone()));
    }
    if !errors.is_empty() {
        log::warn!("{} of {cells} statistics could not be estimated; see the report", errors.len());
    }
    Ok(AnalyzeRun { report, written })
}
