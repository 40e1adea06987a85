use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Weekly series on a dense grid; `None` marks a missing week.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series<T> {
    pub name: String,
    pub values: Vec<Option<T>>,
}

impl<T: Scalar> Series<T> {
    pub fn new(name: impl Into<String>, values: Vec<Option<T>>) -> Result<Self> {
        let name = name.into();
        if let Some(week) = values.iter().position(|v| v.is_some_and(|x| !x.is_finite())) {
            return Err(Error::NonFinite { week: week as i64 });
        }
        Ok(Series { name, values })
    }

    pub fn from_values(name: impl Into<String>, values: &[T]) -> Result<Self> {
        Self::new(name, values.iter().copied().map(Some).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, week: usize) -> Option<T> {
        self.values.get(week).copied().flatten()
    }

    pub fn observed(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    fn renamed(&self, suffix: &str, values: Vec<Option<T>>) -> Series<T> {
        Series {
            name: format!("{}{}", self.name, suffix),
            values,
        }
    }
}

/// Value at week t becomes the value from week t − k.
pub fn lag<T: Scalar>(s: &Series<T>, k: usize) -> Result<Series<T>> {
    if k == 0 {
        return Ok(s.clone());
    }
    if k >= s.len() {
        return Err(Error::InsufficientObservations {
            have: s.len(),
            need: k + 1,
        });
    }
    let values = (0..s.len())
        .map(|t| if t < k { None } else { s.values[t - k] })
        .collect();
    Ok(s.renamed(&format!("_lag{k}"), values))
}

/// `Δs(t) = s(t) − s(t−1)`; the first week is missing.
pub fn first_difference<T: Scalar>(s: &Series<T>) -> Result<Series<T>> {
    if s.len() < 2 {
        return Err(Error::InsufficientObservations {
            have: s.len(),
            need: 2,
        });
    }
    let values = (0..s.len())
        .map(|t| match t {
            0 => None,
            _ => Some(s.values[t]? - s.values[t - 1]?),
        })
        .collect();
    Ok(s.renamed("_diff", values))
}

/// Weeks where every series is observed (listwise deletion), and how many
/// weeks were dropped.
pub fn complete_rows<T: Scalar>(series: &[&Series<T>]) -> (Vec<usize>, usize) {
    let len = series.iter().map(|s| s.len()).min().unwrap_or(0);
    let rows: Vec<usize> = (0..len)
        .filter(|&t| series.iter().all(|s| s.values[t].is_some()))
        .collect();
    let dropped = len - rows.len();
    (rows, dropped)
}
