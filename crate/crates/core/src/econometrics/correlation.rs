use serde::Serialize;

use super::ols::t_two_sided;
use super::series::{complete_rows, Series};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationResult<T> {
    pub r: T,
    pub n: usize,
    /// Two-sided, Student t with n − 2 degrees of freedom.
    pub p: f64,
}

/// Pearson product-moment correlation over weeks where both are observed.
pub fn pearson<T: Scalar>(x: &Series<T>, y: &Series<T>) -> Result<CorrelationResult<T>> {
    let (rows, _) = complete_rows(&[x, y]);
    let n = rows.len();
    if n < 3 {
        return Err(Error::InsufficientObservations { have: n, need: 3 });
    }
    let xs: Vec<T> = rows.iter().map(|&t| x.values[t].expect("complete")).collect();
    let ys: Vec<T> = rows.iter().map(|&t| y.values[t].expect("complete")).collect();
    let n_t = T::of_usize(n);
    let mx = xs.iter().copied().sum::<T>() / n_t;
    let my = ys.iter().copied().sum::<T>() / n_t;
    let (mut sxx, mut syy, mut sxy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in xs.iter().zip(&ys) {
        let (dx, dy) = (a - mx, b - my);
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
        sxy = sxy + dx * dy;
    }
    if sxx == T::zero() {
        return Err(Error::ZeroVariance(x.name.clone()));
    }
    if syy == T::zero() {
        return Err(Error::ZeroVariance(y.name.clone()));
    }
    let r = (sxy / (sxx.sqrt() * syy.sqrt())).max(-T::one()).min(T::one());
    let rf = r.as_f64();
    let p = if rf.abs() >= 1.0 {
        0.0
    } else {
        let t = rf * ((n as f64 - 2.0) / (1.0 - rf * rf)).sqrt();
        t_two_sided(t, n as f64 - 2.0)
    };
    Ok(CorrelationResult { r, n, p })
}
