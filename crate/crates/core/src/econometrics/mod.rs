//! Statistical kernel: lags and differences, Pearson correlation, OLS with
//! Durbin-Watson, Granger tests, the weekly feature panel and the analysis
//! battery built on them.

pub mod battery;
pub mod correlation;
pub mod granger;
mod linalg;
pub mod ols;
pub mod panel;
pub mod report;
pub mod series;

pub use battery::{
    default_models, run_battery, stars, AnalysisConfig, AnalysisReport, GrangerConfig, ModelSpec, Term,
};
pub use correlation::{pearson, CorrelationResult};
pub use granger::{granger_design, granger_test, granger_test_with, GrangerDesign, GrangerOptions, GrangerResult};
pub use ols::{adjusted_r_squared, durbin_watson, ols, ols_matrix, OlsResult};
pub use panel::{build_panel, FeaturePanel, WindowFeatures, PREDICTORS, PRICE};
pub use series::{first_difference, lag, Series};
