//! Weekly network, semantic and activity features from a forum corpus,
//! and the correlation, Granger and regression analyses that relate them
//! to a weekly price series.
//!
//! The numeric modules ([`centrality`], [`semantics`], [`econometrics`])
//! are generic over [`Scalar`] (`f32` or `f64`); the aliases below fix
//! them to `f64`, which is what the pipeline uses.

pub mod centrality;
pub mod corpus;
pub mod econometrics;
pub mod error;
pub mod graphs;
pub mod oracle;
pub mod pipeline;
pub mod scalar;
pub mod selftest;
pub mod semantics;
pub mod synth;
pub mod textproc;

pub use error::{Error, ErrorClass, Result};
pub use scalar::Scalar;

pub type Centrality = centrality::CentralityVector<f64>;
pub type Centralization = centrality::CentralizationScore<f64>;
pub type Sentiment = semantics::SentimentScore<f64>;
pub type WeeklySemantics = semantics::WindowSemantics<f64>;
pub type WeeklySeries = econometrics::Series<f64>;
pub type Correlation = econometrics::CorrelationResult<f64>;
pub type OlsFit = econometrics::OlsResult<f64>;
pub type Granger = econometrics::GrangerResult<f64>;
pub type Panel = econometrics::FeaturePanel<f64>;
pub type Features = econometrics::WindowFeatures<f64>;
