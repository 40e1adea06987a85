//! CSV tables and a Markdown summary for an [`AnalysisReport`].

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::battery::{stars, AnalysisReport};
use super::panel::label_of;
use crate::error::{Error, Result};

fn num(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_bytes(header: &[&str], rows: Vec<Vec<String>>) -> Result<Vec<u8>> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let res = (|| -> std::result::Result<(), csv::Error> {
        wtr.write_record(header)?;
        for r in rows {
            wtr.write_record(&r)?;
        }
        Ok(())
    })();
    res.map_err(|e| Error::Invalid(e.to_string()))?;
    wtr.into_inner().map_err(|e| Error::Invalid(e.to_string()))
}

pub fn correlations_csv(report: &AnalysisReport) -> Result<Vec<u8>> {
    let rows = report
        .correlations
        .iter()
        .map(|c| {
            vec![
                c.predictor.clone(),
                c.lag.to_string(),
                num(c.r),
                num(c.p),
                c.n.map(|n| n.to_string()).unwrap_or_default(),
                c.p.map(stars).unwrap_or_default().to_owned(),
                c.error.clone().unwrap_or_default(),
            ]
        })
        .collect();
    csv_bytes(&["predictor", "lag", "r", "p", "n", "stars", "error"], rows)
}

pub fn granger_csv(report: &AnalysisReport) -> Result<Vec<u8>> {
    let rows = report
        .granger
        .iter()
        .map(|g| {
            vec![
                g.predictor.clone(),
                num(g.chi2),
                g.df.to_string(),
                num(g.p),
                g.n.map(|n| n.to_string()).unwrap_or_default(),
                g.p.map(stars).unwrap_or_default().to_owned(),
                g.error.clone().unwrap_or_default(),
            ]
        })
        .collect();
    csv_bytes(&["predictor", "chi2", "df", "p", "n", "stars", "error"], rows)
}

pub fn coefficients_csv(report: &AnalysisReport) -> Result<Vec<u8>> {
    let rows = report
        .models
        .iter()
        .flat_map(|m| {
            m.coefficients.iter().map(move |c| {
                vec![
                    m.name.clone(),
                    c.column.clone(),
                    c.lag.to_string(),
                    c.estimate.to_string(),
                    c.std_error.to_string(),
                    c.t.to_string(),
                    c.p.to_string(),
                    stars(c.p).to_owned(),
                ]
            })
        })
        .collect();
    csv_bytes(
        &["model", "term", "lag", "estimate", "std_error", "t", "p", "stars"],
        rows,
    )
}

pub fn models_csv(report: &AnalysisReport) -> Result<Vec<u8>> {
    let rows = report
        .models
        .iter()
        .map(|m| {
            vec![
                m.name.clone(),
                m.n.map(|n| n.to_string()).unwrap_or_default(),
                m.k.to_string(),
                num(m.r_squared),
                num(m.adj_r_squared),
                num(m.durbin_watson),
                num(m.condition_number),
                m.excluded.map(|n| n.to_string()).unwrap_or_default(),
                m.error.clone().unwrap_or_default(),
            ]
        })
        .collect();
    csv_bytes(
        &[
            "model",
            "n",
            "k",
            "r_squared",
            "adj_r_squared",
            "durbin_watson",
            "condition_number",
            "excluded",
            "error",
        ],
        rows,
    )
}

pub fn markdown_summary(report: &AnalysisReport) -> String {
    let mut md = String::new();
    let lags: Vec<usize> = {
        let mut l: Vec<usize> = report.correlations.iter().map(|c| c.lag).collect();
        l.sort_unstable();
        l.dedup();
        l
    };
    let mut predictors: Vec<&str> = Vec::new();
    for c in &report.correlations {
        if !predictors.contains(&c.predictor.as_str()) {
            predictors.push(&c.predictor);
        }
    }

    md.push_str("# Analysis summary\n\n## Correlations with price\n\n| Predictor |");
    for l in &lags {
        let _ = write!(md, " Lag {l} |");
    }
    md.push_str("\n|---|");
    md.push_str(&"---|".repeat(lags.len()));
    md.push('\n');
    for p in &predictors {
        let _ = write!(md, "| {} |", label_of(p));
        for &l in &lags {
            let cell = report.correlation(p, l);
            match cell.and_then(|c| c.r.zip(c.p)) {
                Some((r, pv)) => {
                    let _ = write!(md, " {r:.3}{} |", stars(pv));
                }
                None => md.push_str(" n/a |"),
            }
        }
        md.push('\n');
    }

    md.push_str("\n## Granger causality (dependent: price)\n\n| Predictor | χ² | df | p |\n|---|---|---|---|\n");
    for g in &report.granger {
        match (g.chi2, g.p) {
            (Some(c), Some(p)) => {
                let _ = writeln!(md, "| {} | {c:.3}{} | {} | {p:.4} |", label_of(&g.predictor), stars(p), g.df);
            }
            _ => {
                let _ = writeln!(
                    md,
                    "| {} | n/a | {} | {} |",
                    label_of(&g.predictor),
                    g.df,
                    g.error.as_deref().unwrap_or("")
                );
            }
        }
    }

    md.push_str("\n## Regression models (dependent: price)\n\n| Model | Terms | Adj. R² | DW | n |\n|---|---|---|---|---|\n");
    for m in &report.models {
        let terms: Vec<String> = m
            .coefficients
            .iter()
            .map(|c| {
                let name = if c.lag > 0 {
                    format!("{} (lag {})", label_of(&c.column), c.lag)
                } else {
                    label_of(&c.column).to_owned()
                };
                format!("{name}: {:.4}{}", c.estimate, stars(c.p))
            })
            .collect();
        match m.adj_r_squared {
            Some(adj) => {
                let _ = writeln!(
                    md,
                    "| {} | {} | {adj:.3} | {} | {} |",
                    m.name,
                    terms.join("; "),
                    m.durbin_watson.map(|d| format!("{d:.3}")).unwrap_or_default(),
                    m.n.unwrap_or(0)
                );
            }
            None => {
                let _ = writeln!(md, "| {} | {} | n/a | | |", m.name, m.error.as_deref().unwrap_or(""));
            }
        }
    }
    if let (Some(inc), Some(b), Some(c)) = (
        report.incremental_adj_r2,
        report.baseline_model.as_deref(),
        report.combined_model.as_deref(),
    ) {
        let _ = writeln!(md, "\nAdjusted R² gain of {c} over {b}: {:.1} percentage points.", inc * 100.0);
    }
    md.push_str("\n*p<.05; **p<.01\n");
    md
}

/// Write all report files into `dir`, returning the paths written.
pub fn write_report(dir: &Path, report: &AnalysisReport) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files: [(&str, Vec<u8>); 5] = [
        ("correlations.csv", correlations_csv(report)?),
        ("granger.csv", granger_csv(report)?),
        ("coefficients.csv", coefficients_csv(report)?),
        ("models.csv", models_csv(report)?),
        ("summary.md", markdown_summary(report).into_bytes()),
    ];
    let mut written = Vec::new();
    for (name, bytes) in files {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
