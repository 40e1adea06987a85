//! Slow reference computations used to cross-check the fast paths.
//!
//! Nothing here shares code with the production algorithms; these are the
//! independent routes exercised by the test suites and by `selftest`.

#![allow(clippy::needless_range_loop)]

use std::collections::VecDeque;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graphs::{DirectedWeightedGraph, GraphBuilder};

/// Erdős–Rényi digraph with labels `n0000…`, arc probability `p`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> DirectedWeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new();
    let label = |i: usize| format!("n{i:04}");
    for i in 0..n {
        b.add_node(&label(i));
    }
    for s in 0..n {
        for t in 0..n {
            if s != t && rng.random_bool(p) {
                b.add_arc(&label(s), &label(t), 1);
            }
        }
    }
    b.build()
}

fn adjacency(g: &DirectedWeightedGraph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut adj = vec![vec![false; n]; n];
    for (s, t, _) in g.arcs() {
        adj[s][t] = true;
    }
    adj
}

/// Betweenness by explicit enumeration of every directed geodesic, in exact
/// rational arithmetic. Distances come from Floyd–Warshall. Exponential in
/// the worst case; meant for n ≤ 8.
pub fn brute_force_betweenness(g: &DirectedWeightedGraph) -> Vec<Ratio<u64>> {
    let n = g.node_count();
    let adj = adjacency(g);
    const INF: usize = usize::MAX / 4;
    let mut dist = vec![vec![INF; n]; n];
    for (s, row) in dist.iter_mut().enumerate() {
        row[s] = 0;
        for t in 0..n {
            if adj[s][t] {
                row[t] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = dist[i][k] + dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }

    fn walk(
        adj: &[Vec<bool>],
        path: &mut Vec<usize>,
        target: usize,
        remaining: usize,
        found: &mut Vec<Vec<usize>>,
    ) {
        let v = *path.last().expect("non-empty path");
        if remaining == 0 {
            if v == target {
                found.push(path.clone());
            }
            return;
        }
        for (w, &arc) in adj[v].iter().enumerate() {
            if arc {
                path.push(w);
                walk(adj, path, target, remaining - 1, found);
                path.pop();
            }
        }
    }

    let mut score = vec![Ratio::from_integer(0u64); n];
    for s in 0..n {
        for t in 0..n {
            if s == t || dist[s][t] >= INF {
                continue;
            }
            let mut paths = Vec::new();
            walk(&adj, &mut vec![s], t, dist[s][t], &mut paths);
            let sigma = paths.len() as u64;
            for (v, sc) in score.iter_mut().enumerate() {
                if v == s || v == t {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&v)).count() as u64;
                if through > 0 {
                    *sc += Ratio::new(through, sigma);
                }
            }
        }
    }
    score
}

pub fn ratio_to_f64(r: &Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Textbook Brandes with explicit predecessor lists, single-threaded f64.
pub fn brandes_reference(g: &DirectedWeightedGraph) -> Vec<f64> {
    let n = g.node_count();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, t, _) in g.arcs() {
        out[s].push(t);
    }
    let mut cb = vec![0.0; n];
    for s in 0..n {
        let mut stack = Vec::new();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sigma = vec![0.0f64; n];
        let mut dist = vec![-1i64; n];
        sigma[s] = 1.0;
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            stack.push(v);
            for &w in &out[v] {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    q.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        let mut delta = vec![0.0; n];
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                cb[w] += delta[w];
            }
        }
    }
    cb
}

/// Count ordered same-stream pairs `(i, j)`, `0 < j − i ≤ window`, split
/// into distinct-word pairs and identical-word pairs.
pub fn cooccurrence_pairs(streams: &[Vec<String>], window: usize) -> (u64, u64) {
    let (mut distinct, mut same) = (0, 0);
    for s in streams {
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                if j - i > window {
                    break;
                }
                if s[i] == s[j] {
                    same += 1;
                } else {
                    distinct += 1;
                }
            }
        }
    }
    (distinct, same)
}

/// OLS coefficients from the normal equations `(XᵀX)β = Xᵀy`, solved by
/// Gauss–Jordan elimination with partial pivoting. `rows` already include
/// any intercept column.
pub fn normal_equations(rows: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let k = rows.first()?.len();
    let mut a = vec![vec![0.0; k + 1]; k];
    for (row, &yi) in rows.iter().zip(y) {
        for i in 0..k {
            for j in 0..k {
                a[i][j] += row[i] * row[j];
            }
            a[i][k] += row[i] * yi;
        }
    }
    for col in 0..k {
        let pivot = (col..k).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        for r in 0..k {
            if r != col {
                let f = a[r][col];
                if f != 0.0 {
                    for c in 0..=k {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[k]).collect())
}

/// Residual sum of squares of `y` against fitted `rows · beta`.
pub fn rss(rows: &[Vec<f64>], y: &[f64], beta: &[f64]) -> f64 {
    rows.iter()
        .zip(y)
        .map(|(r, &yi)| {
            let fit: f64 = r.iter().zip(beta).map(|(x, b)| x * b).sum();
            (yi - fit).powi(2)
        })
        .sum()
}

/// Pearson r from raw sums: `(nΣxy − ΣxΣy) / sqrt((nΣx² − (Σx)²)(nΣy² − (Σy)²))`.
pub fn pearson_textbook(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let syy: f64 = y.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx) * (n * syy - sy * sy)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_on_four_cycle() {
        let mut b = GraphBuilder::new();
        for (s, t) in [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")] {
            b.add_arc(s, t, 1);
        }
        let bc = brute_force_betweenness(&b.build());
        assert!(bc.iter().all(|r| *r == Ratio::from_integer(3)));
    }

    #[test]
    fn brute_force_splits_parallel_geodesics() {
        // two geodesics a→b→d and a→c→d: b and c each carry half
        let mut b = GraphBuilder::new();
        for (s, t) in [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")] {
            b.add_arc(s, t, 1);
        }
        let g = b.build();
        let bc = brute_force_betweenness(&g);
        assert_eq!(bc[g.node("b").unwrap()], Ratio::new(1, 2));
        assert_eq!(bc[g.node("a").unwrap()], Ratio::from_integer(0));
    }

    #[test]
    fn normal_equations_exact_line() {
        let rows: Vec<Vec<f64>> = (0..5).map(|i| vec![1.0, i as f64]).collect();
        let y: Vec<f64> = (0..5).map(|i| 1.0 + 2.0 * i as f64).collect();
        let beta = normal_equations(&rows, &y).unwrap();
        assert!((beta[0] - 1.0).abs() < 1e-12 && (beta[1] - 2.0).abs() < 1e-12);
    }
}
