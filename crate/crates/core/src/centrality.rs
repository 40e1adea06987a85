//! Degree and betweenness centrality on directed graphs, with Freeman-style
//! group centralization.
//!
//! Both centralities ignore arc weights: degree counts distinct incident
//! arcs and betweenness uses hop-count geodesics. Normalization divides by
//! `2(n−1)` (degree) and `(n−1)(n−2)` (betweenness), so a bidirectional
//! star centre scores exactly 1.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::DirectedWeightedGraph;
use crate::scalar::Scalar;

/// Sources processed sequentially by one task. Partial sums are merged in
/// chunk order, so results are bit-identical for any thread count.
const SOURCE_CHUNK: usize = 32;
/// Chunks materialized at once; bounds memory to `CHUNK_BATCH × n` scalars.
const CHUNK_BATCH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Degree,
    Betweenness,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector<T> {
    pub metric: Metric,
    /// Node labels, aligned with `raw` and `normalized`.
    pub nodes: Vec<String>,
    pub raw: Vec<T>,
    pub normalized: Vec<T>,
    pub graph_n: usize,
}

impl<T: Scalar> CentralityVector<T> {
    fn from_raw(metric: Metric, g: &DirectedWeightedGraph, raw: Vec<T>) -> Self {
        let n = g.node_count();
        let max_possible = match metric {
            Metric::Degree if n >= 2 => Some(T::of_usize(2 * (n - 1))),
            Metric::Betweenness if n >= 3 => Some(T::of_usize((n - 1) * (n - 2))),
            _ => None,
        };
        let normalized = match max_possible {
            Some(d) => raw.iter().map(|&r| r / d).collect(),
            None => vec![T::zero(); n],
        };
        CentralityVector {
            metric,
            nodes: g.labels().to_vec(),
            raw,
            normalized,
            graph_n: n,
        }
    }

    fn position(&self, label: &str) -> Option<usize> {
        // labels come from a frozen graph and are sorted
        self.nodes.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }

    pub fn raw_of(&self, label: &str) -> Option<T> {
        self.position(label).map(|i| self.raw[i])
    }

    pub fn normalized_of(&self, label: &str) -> Option<T> {
        self.position(label).map(|i| self.normalized[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CentralizationScore<T> {
    pub metric: Metric,
    pub value: T,
}

/// Distinct in-arcs plus distinct out-arcs.
pub fn degree_centrality<T: Scalar>(g: &DirectedWeightedGraph) -> CentralityVector<T> {
    let raw = (0..g.node_count())
        .map(|v| T::of_usize(g.in_degree(v) + g.out_degree(v)))
        .collect();
    CentralityVector::from_raw(Metric::Degree, g, raw)
}

/// Exact betweenness (Brandes, unweighted) over ordered source/target pairs.
pub fn betweenness_centrality<T: Scalar>(g: &DirectedWeightedGraph) -> CentralityVector<T> {
    let sources: Vec<usize> = (0..g.node_count()).collect();
    let raw = accumulate_dependencies(g, &sources);
    CentralityVector::from_raw(Metric::Betweenness, g, raw)
}

/// Source-sampled betweenness: `sample_count` distinct sources drawn with a
/// seeded ChaCha8 generator, dependencies scaled by `n / sample_count`.
/// With `sample_count == n` every source is used and the result equals the
/// exact computation bit for bit.
pub fn approx_betweenness<T: Scalar>(
    g: &DirectedWeightedGraph,
    sample_count: usize,
    seed: u64,
) -> Result<CentralityVector<T>> {
    let n = g.node_count();
    if sample_count == 0 || sample_count > n {
        return Err(Error::Invalid(format!(
            "sample count {sample_count} outside 1..={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sources = rand::seq::index::sample(&mut rng, n, sample_count).into_vec();
    sources.sort_unstable();
    let mut raw = accumulate_dependencies::<T>(g, &sources);
    if sample_count < n {
        let scale = T::of_usize(n) / T::of_usize(sample_count);
        for r in &mut raw {
            *r = *r * scale;
        }
    }
    Ok(CentralityVector::from_raw(Metric::Betweenness, g, raw))
}

struct Workspace<T> {
    sigma: Vec<T>,
    delta: Vec<T>,
    dist: Vec<i64>,
    order: Vec<usize>,
    queue: std::collections::VecDeque<usize>,
}

impl<T: Scalar> Workspace<T> {
    fn new(n: usize) -> Self {
        Workspace {
            sigma: vec![T::zero(); n],
            delta: vec![T::zero(); n],
            dist: vec![-1; n],
            order: Vec::with_capacity(n),
            queue: std::collections::VecDeque::with_capacity(n),
        }
    }

    /// Single-source pass; adds each node's dependency on `s` into `acc`.
    fn add_source(&mut self, g: &DirectedWeightedGraph, s: usize, acc: &mut [T]) {
        for &v in &self.order {
            self.sigma[v] = T::zero();
            self.delta[v] = T::zero();
            self.dist[v] = -1;
        }
        self.order.clear();

        self.sigma[s] = T::one();
        self.dist[s] = 0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            for w in g.successors(v) {
                if self.dist[w] < 0 {
                    self.dist[w] = self.dist[v] + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w] == self.dist[v] + 1 {
                    self.sigma[w] = self.sigma[w] + self.sigma[v];
                }
            }
        }

        // Predecessors on geodesics are recovered from the in-lists rather
        // than stored per source.
        for &w in self.order.iter().rev() {
            let coeff = (T::one() + self.delta[w]) / self.sigma[w];
            for &v in g.predecessors(w) {
                if self.dist[v] >= 0 && self.dist[v] + 1 == self.dist[w] {
                    self.delta[v] = self.delta[v] + self.sigma[v] * coeff;
                }
            }
            if w != s {
                acc[w] = acc[w] + self.delta[w];
            }
        }
    }
}

fn accumulate_dependencies<T: Scalar>(g: &DirectedWeightedGraph, sources: &[usize]) -> Vec<T> {
    let n = g.node_count();
    let mut total = vec![T::zero(); n];
    let chunks: Vec<&[usize]> = sources.chunks(SOURCE_CHUNK).collect();
    for batch in chunks.chunks(CHUNK_BATCH) {
        let partials: Vec<Vec<T>> = batch
            .par_iter()
            .map(|chunk| {
                let mut ws = Workspace::new(n);
                let mut acc = vec![T::zero(); n];
                for &s in *chunk {
                    ws.add_source(g, s, &mut acc);
                }
                acc
            })
            .collect();
        for p in partials {
            for (t, v) in total.iter_mut().zip(p) {
                *t = *t + v;
            }
        }
    }
    total
}

/// Freeman centralization: `Σ(c* − c_i)` over normalized scores divided by
/// `n − 2` (degree) or `n − 1` (betweenness).
pub fn centralization<T: Scalar>(cv: &CentralityVector<T>) -> Result<CentralizationScore<T>> {
    let n = cv.graph_n;
    if n < 3 {
        return Err(Error::TooFewNodes(n));
    }
    let max = cv
        .normalized
        .iter()
        .copied()
        .fold(T::neg_infinity(), T::max);
    let spread: T = cv.normalized.iter().map(|&c| max - c).sum();
    let denom = match cv.metric {
        Metric::Degree => T::of_usize(n - 2),
        Metric::Betweenness => T::of_usize(n - 1),
    };
    Ok(CentralizationScore {
        metric: cv.metric,
        value: spread / denom,
    })
}
