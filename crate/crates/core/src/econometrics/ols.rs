//! Ordinary least squares with classical inference and residual
//! diagnostics.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::linalg;
use super::series::{complete_rows, Series};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const INTERCEPT: &str = "const";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OlsResult<T> {
    /// Regressor names; `const` first when an intercept is fitted.
    pub names: Vec<String>,
    pub coefficients: Vec<T>,
    pub std_errors: Vec<T>,
    pub t_stats: Vec<T>,
    pub p_values: Vec<f64>,
    pub r_squared: T,
    pub adj_r_squared: T,
    pub residuals: Vec<T>,
    pub rss: T,
    /// Observations used after listwise deletion.
    pub n: usize,
    /// Regressors excluding the intercept.
    pub k: usize,
    pub excluded: usize,
    pub durbin_watson: Option<T>,
    pub condition_number: T,
}

impl<T: Scalar> OlsResult<T> {
    pub fn coefficient(&self, name: &str) -> Option<T> {
        self.names.iter().position(|n| n == name).map(|i| self.coefficients[i])
    }

    pub fn df_resid(&self) -> usize {
        self.n - self.coefficients.len()
    }
}

/// Regress `y` on `xs` after dropping any week with a missing value.
pub fn ols<T: Scalar>(y: &Series<T>, xs: &[&Series<T>], intercept: bool) -> Result<OlsResult<T>> {
    let mut all: Vec<&Series<T>> = vec![y];
    all.extend_from_slice(xs);
    let (rows, excluded) = complete_rows(&all);
    let yv: Vec<T> = rows.iter().map(|&t| y.values[t].expect("complete row")).collect();
    let cols: Vec<Vec<T>> = xs
        .iter()
        .map(|s| rows.iter().map(|&t| s.values[t].expect("complete row")).collect())
        .collect();
    let names: Vec<String> = xs.iter().map(|s| s.name.clone()).collect();
    let mut fit = ols_matrix(&yv, &cols, &names, intercept)?;
    fit.excluded = excluded;
    Ok(fit)
}

/// OLS on already-aligned data. `columns` excludes the intercept.
pub fn ols_matrix<T: Scalar>(
    y: &[T],
    columns: &[Vec<T>],
    names: &[String],
    intercept: bool,
) -> Result<OlsResult<T>> {
    let n = y.len();
    let k = columns.len();
    let p = k + usize::from(intercept);
    if n <= p {
        return Err(Error::InsufficientObservations { have: n, need: p + 1 });
    }
    let mut design: Vec<Vec<T>> = Vec::with_capacity(p);
    let mut all_names = Vec::with_capacity(p);
    if intercept {
        design.push(vec![T::one(); n]);
        all_names.push(INTERCEPT.to_owned());
    }
    design.extend(columns.iter().cloned());
    all_names.extend(names.iter().cloned());

    let ls = linalg::solve(&design, y)?;
    let rss: T = ls.residuals.iter().map(|&e| e * e).sum();
    let n_t = T::of_usize(n);
    let tss: T = if intercept {
        let mean = y.iter().copied().sum::<T>() / n_t;
        y.iter().map(|&v| (v - mean) * (v - mean)).sum()
    } else {
        y.iter().map(|&v| v * v).sum()
    };
    let r_squared = if k == 0 || tss == T::zero() {
        T::zero()
    } else {
        T::one() - rss / tss
    };
    let adj_r_squared = adjusted_r_squared(r_squared, n, k);

    let df = n - p;
    let sigma2 = rss / T::of_usize(df);
    let rinv = linalg::upper_inverse(&ls.r);
    let std_errors: Vec<T> = (0..p)
        .map(|j| (sigma2 * rinv[j].iter().map(|&v| v * v).sum::<T>()).sqrt())
        .collect();
    let t_stats: Vec<T> = ls
        .coefficients
        .iter()
        .zip(&std_errors)
        .map(|(&b, &se)| if se > T::zero() { b / se } else { T::infinity() * b.signum() })
        .collect();
    let p_values = t_stats.iter().map(|&t| t_two_sided(t.as_f64(), df as f64)).collect();

    Ok(OlsResult {
        names: all_names,
        coefficients: ls.coefficients,
        std_errors,
        t_stats,
        p_values,
        r_squared,
        adj_r_squared,
        durbin_watson: durbin_watson(&ls.residuals).ok(),
        residuals: ls.residuals,
        rss,
        n,
        k,
        excluded: 0,
        condition_number: linalg::scaled_condition_number(&design),
    })
}

/// `1 − (1 − R²)(n − 1)/(n − k − 1)`.
pub fn adjusted_r_squared<T: Scalar>(r_squared: T, n: usize, k: usize) -> T {
    T::one() - (T::one() - r_squared) * T::of_usize(n - 1) / T::of_usize(n - k - 1)
}

/// Two-sided p-value of a t statistic.
pub(crate) fn t_two_sided(t: f64, df: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t.is_infinite() {
        return 0.0;
    }
    let dist = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom");
    (2.0 * dist.sf(t.abs())).clamp(0.0, 1.0)
}

/// `Σ(e_t − e_{t−1})² / Σe_t²`.
pub fn durbin_watson<T: Scalar>(residuals: &[T]) -> Result<T> {
    if residuals.len() < 2 {
        return Err(Error::InsufficientObservations {
            have: residuals.len(),
            need: 2,
        });
    }
    let den: T = residuals.iter().map(|&e| e * e).sum();
    if den == T::zero() {
        return Err(Error::Invalid("Durbin-Watson undefined for all-zero residuals".into()));
    }
    let num: T = residuals.windows(2).map(|w| (w[1] - w[0]) * (w[1] - w[0])).sum();
    Ok(num / den)
}
