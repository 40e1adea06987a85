//! The full analysis battery over a feature panel: lagged correlations,
//! Granger tests against the differenced price, and declaratively defined
//! regression models.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::correlation::pearson;
use super::granger::{granger_test_with, GrangerOptions};
use super::ols::{ols, INTERCEPT};
use super::panel::{FeaturePanel, PREDICTORS};
use super::series::Series;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub column: String,
    #[serde(default)]
    pub lag: usize,
}

impl Term {
    pub fn new(column: &str, lag: usize) -> Self {
        Term {
            column: column.to_owned(),
            lag,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub name: String,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct GrangerConfig {
    pub max_lag: usize,
    pub difference_dependent: bool,
    /// Column ids entered with lags in both the restricted and
    /// unrestricted regressions.
    pub conditioning: Vec<String>,
}

impl Default for GrangerConfig {
    fn default() -> Self {
        let d = GrangerOptions::default();
        GrangerConfig {
            max_lag: d.max_lag,
            difference_dependent: d.difference_dependent,
            conditioning: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisConfig {
    pub correlation_lags: Vec<usize>,
    pub granger: GrangerConfig,
    pub models: Vec<ModelSpec>,
    /// Model whose adjusted R² is the reference for the incremental gain.
    pub baseline_model: Option<String>,
    pub combined_model: Option<String>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            correlation_lags: vec![0, 1, 2],
            granger: GrangerConfig::default(),
            models: default_models(),
            baseline_model: Some("Model 1".into()),
            combined_model: Some("Model 8".into()),
        }
    }
}

/// Block models 1–7 and the combined model 8, with the per-variable lags
/// used in the original study.
pub fn default_models() -> Vec<ModelSpec> {
    let m = |name: &str, terms: &[(&str, usize)]| ModelSpec {
        name: name.to_owned(),
        terms: terms.iter().map(|&(c, l)| Term::new(c, l)).collect(),
    };
    vec![
        m("Model 1", &[("control", 0)]),
        m("Model 2", &[("complexity", 0), ("emotionality", 1), ("sentiment", 2)]),
        m("Model 3", &[("activity_words", 1)]),
        m("Model 4", &[("activity", 0), ("group_betweenness", 2)]),
        m("Model 5", &[("group_degree", 0)]),
        m("Model 6", &[("focal_betweenness", 0)]),
        m("Model 7", &[("focal_degree", 0)]),
        m(
            "Model 8",
            &[
                ("control", 0),
                ("sentiment", 2),
                ("activity_words", 1),
                ("group_betweenness", 2),
                ("focal_betweenness", 0),
            ],
        ),
    ]
}

pub fn stars(p: f64) -> &'static str {
    if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationCell {
    pub predictor: String,
    pub lag: usize,
    pub r: Option<f64>,
    pub p: Option<f64>,
    pub n: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrangerCell {
    pub predictor: String,
    pub chi2: Option<f64>,
    pub df: usize,
    pub p: Option<f64>,
    pub n: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientRow {
    pub column: String,
    pub lag: usize,
    pub estimate: f64,
    pub std_error: f64,
    pub t: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelReport {
    pub name: String,
    /// Intercept first.
    pub coefficients: Vec<CoefficientRow>,
    pub n: Option<usize>,
    pub k: usize,
    pub r_squared: Option<f64>,
    pub adj_r_squared: Option<f64>,
    pub durbin_watson: Option<f64>,
    pub condition_number: Option<f64>,
    pub excluded: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub correlations: Vec<CorrelationCell>,
    pub granger: Vec<GrangerCell>,
    pub models: Vec<ModelReport>,
    pub baseline_model: Option<String>,
    pub combined_model: Option<String>,
    /// Adjusted R² of the combined model minus that of the baseline.
    pub incremental_adj_r2: Option<f64>,
}

impl AnalysisReport {
    pub fn model(&self, name: &str) -> Option<&ModelReport> {
        self.models.iter().find(|m| m.name == name)
    }

    pub fn correlation(&self, predictor: &str, lag: usize) -> Option<&CorrelationCell> {
        self.correlations
            .iter()
            .find(|c| c.predictor == predictor && c.lag == lag)
    }

    pub fn granger_cell(&self, predictor: &str) -> Option<&GrangerCell> {
        self.granger.iter().find(|c| c.predictor == predictor)
    }
}

fn correlation_cell<T: Scalar>(panel: &FeaturePanel<T>, id: &str, lag: usize) -> CorrelationCell {
    let res = panel.lagged(id, lag).and_then(|x| pearson(&x, &panel.price));
    match res {
        Ok(c) => CorrelationCell {
            predictor: id.to_owned(),
            lag,
            r: Some(c.r.as_f64()),
            p: Some(c.p),
            n: Some(c.n),
            error: None,
        },
        Err(e) => CorrelationCell {
            predictor: id.to_owned(),
            lag,
            r: None,
            p: None,
            n: None,
            error: Some(e.to_string()),
        },
    }
}

fn granger_cell<T: Scalar>(panel: &FeaturePanel<T>, id: &str, cfg: &GrangerConfig) -> GrangerCell {
    let opts = GrangerOptions {
        max_lag: cfg.max_lag,
        difference_dependent: cfg.difference_dependent,
    };
    let res = (|| {
        let conditioning = cfg
            .conditioning
            .iter()
            .filter(|c| c.as_str() != id)
            .map(|c| panel.column(c))
            .collect::<Result<Vec<_>>>()?;
        granger_test_with(&panel.price, panel.column(id)?, &conditioning, &opts)
    })();
    match res {
        Ok(g) => GrangerCell {
            predictor: id.to_owned(),
            chi2: Some(g.chi2.as_f64()),
            df: g.df,
            p: Some(g.p),
            n: Some(g.n_obs),
            error: None,
        },
        Err(e) => GrangerCell {
            predictor: id.to_owned(),
            chi2: None,
            df: cfg.max_lag,
            p: None,
            n: None,
            error: Some(e.to_string()),
        },
    }
}

pub fn fit_model<T: Scalar>(panel: &FeaturePanel<T>, spec: &ModelSpec) -> ModelReport {
    let res = (|| {
        let regressors: Vec<Series<T>> = spec
            .terms
            .iter()
            .map(|t| panel.lagged(&t.column, t.lag))
            .collect::<Result<_>>()?;
        let refs: Vec<&Series<T>> = regressors.iter().collect();
        ols(&panel.price, &refs, true)
    })();
    match res {
        Ok(fit) => {
            let terms = std::iter::once((INTERCEPT, 0)).chain(spec.terms.iter().map(|t| (t.column.as_str(), t.lag)));
            let coefficients = terms
                .enumerate()
                .map(|(j, (column, lag))| CoefficientRow {
                    column: column.to_owned(),
                    lag,
                    estimate: fit.coefficients[j].as_f64(),
                    std_error: fit.std_errors[j].as_f64(),
                    t: fit.t_stats[j].as_f64(),
                    p: fit.p_values[j],
                })
                .collect();
            ModelReport {
                name: spec.name.clone(),
                coefficients,
                n: Some(fit.n),
                k: fit.k,
                r_squared: Some(fit.r_squared.as_f64()),
                adj_r_squared: Some(fit.adj_r_squared.as_f64()),
                durbin_watson: fit.durbin_watson.map(Scalar::as_f64),
                condition_number: Some(fit.condition_number.as_f64()),
                excluded: Some(fit.excluded),
                error: None,
            }
        }
        Err(e) => ModelReport {
            name: spec.name.clone(),
            coefficients: Vec::new(),
            n: None,
            k: spec.terms.len(),
            r_squared: None,
            adj_r_squared: None,
            durbin_watson: None,
            condition_number: None,
            excluded: None,
            error: Some(e.to_string()),
        },
    }
}

/// Run every table. Individual cells that fail carry their error message
/// instead of aborting the report; only an invalid config is fatal.
pub fn run_battery<T: Scalar>(panel: &FeaturePanel<T>, cfg: &AnalysisConfig) -> Result<AnalysisReport> {
    if cfg.granger.max_lag == 0 {
        return Err(Error::Config("granger.max_lag must be at least 1".into()));
    }
    for name in [&cfg.baseline_model, &cfg.combined_model].into_iter().flatten() {
        if !cfg.models.iter().any(|m| &m.name == name) {
            return Err(Error::Config(format!("model `{name}` is not defined")));
        }
    }
    let ids: Vec<&str> = PREDICTORS.iter().map(|p| p.0).collect();
    let corr_jobs: Vec<(&str, usize)> = ids
        .iter()
        .flat_map(|&id| cfg.correlation_lags.iter().map(move |&l| (id, l)))
        .collect();
    let correlations = corr_jobs
        .par_iter()
        .map(|&(id, lag)| correlation_cell(panel, id, lag))
        .collect();
    let granger = ids
        .par_iter()
        .map(|id| granger_cell(panel, id, &cfg.granger))
        .collect();
    let models: Vec<ModelReport> = cfg.models.par_iter().map(|m| fit_model(panel, m)).collect();

    let adj = |name: &Option<String>| {
        name.as_ref()
            .and_then(|n| models.iter().find(|m| &m.name == n))
            .and_then(|m| m.adj_r_squared)
    };
    let incremental_adj_r2 = match (adj(&cfg.combined_model), adj(&cfg.baseline_model)) {
        (Some(c), Some(b)) => Some(c - b),
        _ => None,
    };
    Ok(AnalysisReport {
        correlations,
        granger,
        models,
        baseline_model: cfg.baseline_model.clone(),
        combined_model: cfg.combined_model.clone(),
        incremental_adj_r2,
    })
}
