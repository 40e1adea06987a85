//! Bivariate Granger non-causality test.
//!
//! Restricted model: dependent on a constant and its own lags `1..=p`.
//! Unrestricted model: the same plus the candidate's lags `1..=p`.
//! Optional conditioning series enter both models with lags `1..=p`.
//! Statistic: `n_eff · (RSS_r − RSS_u) / RSS_u`, χ² with `p` degrees of
//! freedom.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::ols::ols_matrix;
use super::series::{first_difference, Series};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrangerOptions {
    pub max_lag: usize,
    /// Test the week-over-week change of the dependent variable.
    #[serde(default)]
    pub difference_dependent: bool,
}

impl Default for GrangerOptions {
    fn default() -> Self {
        GrangerOptions {
            max_lag: 3,
            difference_dependent: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrangerResult<T> {
    pub chi2: T,
    pub df: usize,
    pub p: f64,
    pub lag_order: usize,
    pub n_obs: usize,
    pub rss_restricted: T,
    pub rss_unrestricted: T,
}

/// Aligned regression inputs for one test, exposed for auditing.
#[derive(Debug, Clone, PartialEq)]
pub struct GrangerDesign<T> {
    pub target: Vec<T>,
    /// Own lags, then conditioning lags (restricted model regressors).
    pub restricted: Vec<Vec<T>>,
    /// Candidate lags, appended to `restricted` in the unrestricted model.
    pub candidate: Vec<Vec<T>>,
}

/// Build lag matrices over the weeks where every needed value exists.
pub fn granger_design<T: Scalar>(
    y: &Series<T>,
    x: &Series<T>,
    conditioning: &[&Series<T>],
    opts: &GrangerOptions,
) -> Result<GrangerDesign<T>> {
    let p = opts.max_lag;
    if p == 0 {
        return Err(Error::Invalid("Granger test needs max_lag >= 1".into()));
    }
    let dep = if opts.difference_dependent {
        first_difference(y)?
    } else {
        y.clone()
    };
    let len = dep.len().min(x.len());
    let mut design = GrangerDesign {
        target: Vec::new(),
        restricted: vec![Vec::new(); p * (1 + conditioning.len())],
        candidate: vec![Vec::new(); p],
    };
    for t in p..len {
        let own: Option<Vec<T>> = (1..=p).map(|l| dep.get(t - l)).collect();
        let cond: Option<Vec<T>> = conditioning
            .iter()
            .flat_map(|c| (1..=p).map(move |l| c.get(t - l)))
            .collect();
        let cand: Option<Vec<T>> = (1..=p).map(|l| x.get(t - l)).collect();
        let (Some(target), Some(own), Some(cond), Some(cand)) = (dep.get(t), own, cond, cand) else {
            continue;
        };
        design.target.push(target);
        for (col, v) in design.restricted.iter_mut().zip(own.into_iter().chain(cond)) {
            col.push(v);
        }
        for (col, v) in design.candidate.iter_mut().zip(cand) {
            col.push(v);
        }
    }
    Ok(design)
}

pub fn granger_test<T: Scalar>(y: &Series<T>, x: &Series<T>, max_lag: usize) -> Result<GrangerResult<T>> {
    granger_test_with(
        y,
        x,
        &[],
        &GrangerOptions {
            max_lag,
            difference_dependent: false,
        },
    )
}

pub fn granger_test_with<T: Scalar>(
    y: &Series<T>,
    x: &Series<T>,
    conditioning: &[&Series<T>],
    opts: &GrangerOptions,
) -> Result<GrangerResult<T>> {
    let design = granger_design(y, x, conditioning, opts)?;
    let p = opts.max_lag;
    let n_eff = design.target.len();
    let params = design.restricted.len() + design.candidate.len() + 1;
    if n_eff <= params {
        return Err(Error::InsufficientObservations {
            have: n_eff,
            need: params + 1,
        });
    }
    let names = |prefix: &str, count: usize| -> Vec<String> {
        (1..=count).map(|i| format!("{prefix}{i}")).collect()
    };
    let restricted = ols_matrix(
        &design.target,
        &design.restricted,
        &names("r", design.restricted.len()),
        true,
    )?;
    let mut all = design.restricted.clone();
    all.extend(design.candidate.iter().cloned());
    let unrestricted = ols_matrix(&design.target, &all, &names("u", all.len()), true)?;

    let (rss_r, rss_u) = (restricted.rss, unrestricted.rss);
    if rss_u == T::zero() {
        return Err(Error::RankDeficient { column: all.len() });
    }
    // RSS_u ≤ RSS_r holds exactly; rounding can leave a negative ulp
    let chi2 = (T::of_usize(n_eff) * (rss_r - rss_u) / rss_u).max(T::zero());
    let dist = ChiSquared::new(p as f64).expect("positive df");
    let pv = dist.sf(chi2.as_f64()).clamp(0.0, 1.0);
    Ok(GrangerResult {
        chi2,
        df: p,
        p: pv,
        lag_order: p,
        n_obs: n_eff,
        rss_restricted: rss_r,
        rss_unrestricted: rss_u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = Normal::new(0.0, 1.0).unwrap();
        (0..n).map(|_| d.sample(&mut rng)).collect()
    }

    fn s(name: &str, v: &[f64]) -> Series<f64> {
        Series::from_values(name, v).unwrap()
    }

    fn planted(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
        let x = noise(n, seed);
        let e = noise(n, seed + 1);
        let y = (0..n)
            .map(|t| if t == 0 { 0.1 * e[0] } else { 0.9 * x[t - 1] + 0.1 * e[t] })
            .collect();
        (x, y)
    }

    #[test]
    fn planted_causality_rejected() {
        let (x, y) = planted(200, 3);
        let res = granger_test(&s("y", &y), &s("x", &x), 3).unwrap();
        assert!(res.p < 0.01);
        assert_eq!(res.df, 3);
        assert_eq!(res.n_obs, 197);
    }

    #[test]
    fn statistic_matches_two_regressions() {
        let (x, y) = planted(120, 9);
        let res = granger_test(&s("y", &y), &s("x", &x), 2).unwrap();
        let rows_r: Vec<Vec<f64>> = (2..120).map(|t| vec![1.0, y[t - 1], y[t - 2]]).collect();
        let rows_u: Vec<Vec<f64>> = (2..120)
            .map(|t| vec![1.0, y[t - 1], y[t - 2], x[t - 1], x[t - 2]])
            .collect();
        let target = &y[2..];
        let rss_r = oracle::rss(&rows_r, target, &oracle::normal_equations(&rows_r, target).unwrap());
        let rss_u = oracle::rss(&rows_u, target, &oracle::normal_equations(&rows_u, target).unwrap());
        let chi2 = 118.0 * (rss_r - rss_u) / rss_u;
        assert!((res.chi2 - chi2).abs() <= 1e-8 * chi2);
    }

    #[test]
    fn identical_series_is_collinear() {
        let y = noise(60, 1);
        let err = granger_test(&s("y", &y), &s("x", &y), 3).unwrap_err();
        assert!(matches!(err, Error::RankDeficient { .. }));
    }

    #[test]
    fn too_short() {
        let y = noise(8, 1);
        let x = noise(8, 2);
        assert!(matches!(
            granger_test(&s("y", &y), &s("x", &x), 3),
            Err(Error::InsufficientObservations { .. })
        ));
        assert!(granger_test(&s("y", &y), &s("x", &x), 0).is_err());
    }

    #[test]
    fn differenced_dependent_drops_one_more_week() {
        let (x, y) = planted(100, 5);
        let opts = GrangerOptions { max_lag: 3, difference_dependent: true };
        let res = granger_test_with(&s("y", &y), &s("x", &x), &[], &opts).unwrap();
        assert_eq!(res.n_obs, 96);
        assert!(res.p < 0.01);
    }

    #[test]
    fn conditioning_enters_both_models() {
        let (x, y) = planted(100, 5);
        let z = noise(100, 77);
        let d = granger_design(
            &s("y", &y),
            &s("x", &x),
            &[&s("z", &z)],
            &GrangerOptions { max_lag: 2, difference_dependent: false },
        )
        .unwrap();
        assert_eq!(d.restricted.len(), 4);
        assert_eq!(d.candidate.len(), 2);
        assert_eq!(d.restricted[2][0], z[1]);
    }

    #[test]
    fn missing_weeks_skip_rows() {
        let (x, y) = planted(50, 5);
        let mut xs = s("x", &x);
        xs.values[10] = None;
        let d = granger_design(&s("y", &y), &xs, &[], &GrangerOptions { max_lag: 2, difference_dependent: false }).unwrap();
        // week 10 is a lag of weeks 11 and 12
        assert_eq!(d.target.len(), 48 - 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn statistic_non_negative(seed in 0u64..10_000, lag in 1usize..4) {
            let y = noise(60, seed);
            let x = noise(60, seed + 1);
            let r = granger_test(&s("y", &y), &s("x", &x), lag).unwrap();
            prop_assert!(r.chi2 >= 0.0);
            prop_assert!(r.rss_unrestricted <= r.rss_restricted * (1.0 + 1e-12));
            prop_assert!((0.0..=1.0).contains(&r.p));
        }
    }
}
