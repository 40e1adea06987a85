//! Weekly feature panel: the ten predictors plus the dependent price.

use serde::{Deserialize, Serialize};

use super::series::{lag, Series};
use crate::corpus::MarketSeries;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Predictor columns in report order: `(id, display label)`.
pub const PREDICTORS: [(&str, &str); 10] = [
    ("activity_words", "Activity Words"),
    ("activity", "Activity (Interaction Network)"),
    ("group_betweenness", "Group Betweenness Centrality (Interaction Network)"),
    ("focal_betweenness", "Betweenness Centrality (Word Network)"),
    ("complexity", "Complexity"),
    ("focal_degree", "Degree Centrality (Word Network)"),
    ("emotionality", "Emotionality"),
    ("sentiment", "Sentiment"),
    ("control", "Control Index"),
    ("group_degree", "Group Degree Centrality (Interaction Network)"),
];

pub const PRICE: &str = "price";

pub fn label_of(id: &str) -> &str {
    PREDICTORS
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, l)| *l)
        .unwrap_or(id)
}

/// Per-week features extracted from the corpus. `None` marks a value that
/// is undefined for the week (no messages, or too few nodes for a
/// centralization index).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowFeatures<T> {
    pub week: usize,
    pub activity: u64,
    pub activity_words: u64,
    pub group_degree: Option<T>,
    pub group_betweenness: Option<T>,
    pub focal_degree: T,
    pub focal_betweenness: T,
    pub sentiment: Option<T>,
    pub emotionality: Option<T>,
    pub complexity: Option<T>,
    pub focal_absent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeaturePanel<T> {
    pub weeks: usize,
    /// Predictors in `PREDICTORS` order.
    pub columns: Vec<Series<T>>,
    pub price: Series<T>,
}

impl<T: Scalar> FeaturePanel<T> {
    pub fn column(&self, id: &str) -> Result<&Series<T>> {
        if id == PRICE {
            return Ok(&self.price);
        }
        self.columns
            .iter()
            .find(|c| c.name == id)
            .ok_or_else(|| Error::MissingColumn(id.to_owned()))
    }

    /// Column shifted by `k` weeks, named `<id>_lag<k>` for k > 0.
    pub fn lagged(&self, id: &str, k: usize) -> Result<Series<T>> {
        lag(self.column(id)?, k)
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.columns
            .iter()
            .map(|c| c.name.as_str())
            .chain(std::iter::once(PRICE))
            .collect()
    }
}

fn market_column<T: Scalar>(m: &MarketSeries, id: &str, weeks: usize) -> Result<Series<T>> {
    if let Some((&last, _)) = m.values.iter().next_back() {
        if last >= weeks {
            return Err(Error::GridMismatch(format!(
                "`{}` has week {last} but the feature grid has {weeks} weeks",
                m.name
            )));
        }
    }
    Series::new(id, m.dense(weeks).into_iter().map(|v| v.map(T::of)).collect())
}

/// Assemble the panel. `features[i].week` must equal `i`.
pub fn build_panel<T: Scalar>(
    features: &[WindowFeatures<T>],
    price: &MarketSeries,
    control: &MarketSeries,
) -> Result<FeaturePanel<T>> {
    if let Some((i, f)) = features.iter().enumerate().find(|(i, f)| f.week != *i) {
        return Err(Error::GridMismatch(format!(
            "feature row {i} carries week {}",
            f.week
        )));
    }
    let weeks = features.len();
    let col = |id: &str, get: &dyn Fn(&WindowFeatures<T>) -> Option<T>| {
        Series::new(id, features.iter().map(get).collect())
    };
    let mut columns = Vec::with_capacity(PREDICTORS.len());
    for (id, _) in PREDICTORS {
        let series = match id {
            "activity_words" => col(id, &|f| T::from_u64(f.activity_words)),
            "activity" => col(id, &|f| T::from_u64(f.activity)),
            "group_betweenness" => col(id, &|f| f.group_betweenness),
            "focal_betweenness" => col(id, &|f| Some(f.focal_betweenness)),
            "complexity" => col(id, &|f| f.complexity),
            "focal_degree" => col(id, &|f| Some(f.focal_degree)),
            "emotionality" => col(id, &|f| f.emotionality),
            "sentiment" => col(id, &|f| f.sentiment),
            "control" => market_column(control, id, weeks),
            "group_degree" => col(id, &|f| f.group_degree),
            _ => unreachable!("PREDICTORS is exhaustive"),
        }?;
        columns.push(series);
    }
    Ok(FeaturePanel {
        weeks,
        columns,
        price: market_column(price, PRICE, weeks)?,
    })
}
