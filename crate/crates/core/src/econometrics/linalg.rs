//! Dense least squares by Householder QR.

#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// QR factorization of a tall design matrix stored column-major.
#[derive(Debug, Clone)]
pub(crate) struct LeastSquares<T> {
    pub coefficients: Vec<T>,
    pub residuals: Vec<T>,
    /// Upper-triangular factor, row-major `p × p`.
    pub r: Vec<Vec<T>>,
}

/// Solve `min ‖y − Xβ‖` for column-major `columns` (each of length n).
/// Fails when a column is numerically dependent on the ones before it.
pub(crate) fn solve<T: Scalar>(columns: &[Vec<T>], y: &[T]) -> Result<LeastSquares<T>> {
    let p = columns.len();
    let n = y.len();
    if n < p {
        return Err(Error::InsufficientObservations { have: n, need: p });
    }
    let mut a: Vec<Vec<T>> = columns.to_vec();
    let mut qty: Vec<T> = y.to_vec();
    let tol = T::epsilon() * T::of_usize(n.max(p) * 10);

    for j in 0..p {
        let col_norm = norm(&columns[j]);
        let alpha = norm(&a[j][j..]);
        if alpha <= tol * col_norm || alpha == T::zero() {
            return Err(Error::RankDeficient { column: j });
        }
        let alpha = if a[j][j] > T::zero() { -alpha } else { alpha };
        // v = x − alpha·e1, stored in place of column j below the diagonal
        let mut v: Vec<T> = a[j][j..].to_vec();
        v[0] = v[0] - alpha;
        let vnorm2: T = v.iter().map(|&x| x * x).sum();
        if vnorm2 > T::zero() {
            let reflect = |col: &mut [T]| {
                let dot: T = v.iter().zip(col.iter()).map(|(&a, &b)| a * b).sum();
                let f = (dot + dot) / vnorm2;
                for (c, &vi) in col.iter_mut().zip(&v) {
                    *c = *c - f * vi;
                }
            };
            for col in a.iter_mut().skip(j + 1) {
                reflect(&mut col[j..]);
            }
            reflect(&mut qty[j..]);
        }
        a[j][j] = alpha;
        for x in a[j][j + 1..].iter_mut() {
            *x = T::zero();
        }
    }

    let r: Vec<Vec<T>> = (0..p)
        .map(|i| (0..p).map(|j| if j >= i { a[j][i] } else { T::zero() }).collect())
        .collect();
    let mut beta = vec![T::zero(); p];
    for i in (0..p).rev() {
        let mut s = qty[i];
        for j in i + 1..p {
            s = s - r[i][j] * beta[j];
        }
        beta[i] = s / r[i][i];
    }
    let residuals = (0..n)
        .map(|i| {
            let fit: T = columns.iter().zip(&beta).map(|(c, &b)| c[i] * b).sum();
            y[i] - fit
        })
        .collect();
    Ok(LeastSquares {
        coefficients: beta,
        residuals,
        r,
    })
}

pub(crate) fn norm<T: Scalar>(v: &[T]) -> T {
    let scale = v.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    v.iter().map(|&x| (x / scale) * (x / scale)).sum::<T>().sqrt() * scale
}

/// Inverse of an upper-triangular matrix.
pub(crate) fn upper_inverse<T: Scalar>(r: &[Vec<T>]) -> Vec<Vec<T>> {
    let p = r.len();
    let mut inv = vec![vec![T::zero(); p]; p];
    for col in 0..p {
        for i in (0..=col).rev() {
            let mut s = if i == col { T::one() } else { T::zero() };
            for k in i + 1..=col {
                s = s - r[i][k] * inv[k][col];
            }
            inv[i][col] = s / r[i][i];
        }
    }
    inv
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub(crate) fn symmetric_eigenvalues<T: Scalar>(mut a: Vec<Vec<T>>) -> Vec<T> {
    let p = a.len();
    for _sweep in 0..100 {
        let off: T = (0..p)
            .flat_map(|i| (0..p).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let diag: T = (0..p).map(|i| a[i][i] * a[i][i]).sum();
        if off <= T::epsilon() * T::epsilon() * diag {
            break;
        }
        for i in 0..p {
            for j in i + 1..p {
                if a[i][j] == T::zero() {
                    continue;
                }
                let theta = (a[j][j] - a[i][i]) / (a[i][j] + a[i][j]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..p {
                    let (aki, akj) = (a[k][i], a[k][j]);
                    a[k][i] = c * aki - s * akj;
                    a[k][j] = s * aki + c * akj;
                }
                for k in 0..p {
                    let (aik, ajk) = (a[i][k], a[j][k]);
                    a[i][k] = c * aik - s * ajk;
                    a[j][k] = s * aik + c * ajk;
                }
            }
        }
    }
    (0..p).map(|i| a[i][i]).collect()
}

/// 2-norm condition number of the design after scaling every column to
/// unit length.
pub(crate) fn scaled_condition_number<T: Scalar>(columns: &[Vec<T>]) -> T {
    let p = columns.len();
    if p == 0 {
        return T::one();
    }
    let scaled: Vec<Vec<T>> = columns
        .iter()
        .map(|c| {
            let nrm = norm(c);
            c.iter().map(|&x| x / nrm).collect()
        })
        .collect();
    let gram: Vec<Vec<T>> = (0..p)
        .map(|i| {
            (0..p)
                .map(|j| scaled[i].iter().zip(&scaled[j]).map(|(&a, &b)| a * b).sum())
                .collect()
        })
        .collect();
    let eig = symmetric_eigenvalues(gram);
    let max = eig.iter().copied().fold(T::zero(), T::max);
    let min = eig.iter().copied().fold(T::infinity(), T::min);
    if min <= T::zero() {
        T::infinity()
    } else {
        (max / min).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x: Vec<f64> = (0..6).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 1.0 + 2.0 * v).collect();
        let ls = solve(&[vec![1.0; 6], x], &y).unwrap();
        assert!((ls.coefficients[0] - 1.0).abs() < 1e-12);
        assert!((ls.coefficients[1] - 2.0).abs() < 1e-12);
        assert!(ls.residuals.iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn duplicate_column_is_rank_deficient() {
        let x: Vec<f64> = (0..6).map(|i| (i * i) as f64).collect();
        let err = solve(&[vec![1.0; 6], x.clone(), x], &[0.0; 6]).unwrap_err();
        assert!(matches!(err, Error::RankDeficient { column: 2 }));
    }

    #[test]
    fn tiny_scale_column_is_not_flagged() {
        let x: Vec<f64> = (0..8).map(|i| 1e-7 * (i as f64).sin()).collect();
        let y: Vec<f64> = (0..8).map(|i| 20000.0 + i as f64).collect();
        assert!(solve(&[vec![1.0; 8], x], &y).is_ok());
    }

    #[test]
    fn inverse_and_eigen() {
        let r = vec![vec![2.0, 1.0], vec![0.0, 4.0]];
        let inv = upper_inverse(&r);
        assert_eq!(inv, vec![vec![0.5, -0.125], vec![0.0, 0.25]]);
        let mut eig = symmetric_eigenvalues(vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        eig.sort_by(f64::total_cmp);
        assert!((eig[0] - 1.0).abs() < 1e-12 && (eig[1] - 3.0).abs() < 1e-12);
        let orth: f64 = scaled_condition_number(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!((orth - 1.0).abs() < 1e-12);
    }
}
