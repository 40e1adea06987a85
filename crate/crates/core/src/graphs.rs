//! Directed weighted graphs for the interaction and word networks.
//!
//! Arc weights count events. Self-loops are never stored; the builders
//! tally them separately. Node labels are sorted when a graph is frozen, so
//! the node indexing (and everything computed from it) does not depend on
//! insertion order.

use std::collections::HashMap;
use std::io::Write;

use chrono::{DateTime, Utc};
use serde::Serialize;

use crate::corpus::Message;
use crate::error::{Error, Result};

pub const DEFAULT_WINDOW_SIZE: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedWeightedGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    /// `(source, target, weight)` sorted by `(source, target)`.
    arcs: Vec<(usize, usize, u64)>,
    out_offsets: Vec<usize>,
    in_offsets: Vec<usize>,
    in_sources: Vec<usize>,
    total_weight: u64,
    self_loops: u64,
}

impl DirectedWeightedGraph {
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Distinct ordered pairs.
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    /// Would-be self-loop events that were dropped.
    pub fn self_loops(&self) -> u64 {
        self.self_loops
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    pub fn node(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn weight(&self, source: &str, target: &str) -> Option<u64> {
        let (s, t) = (self.node(source)?, self.node(target)?);
        let range = &self.arcs[self.out_offsets[s]..self.out_offsets[s + 1]];
        range
            .binary_search_by_key(&t, |&(_, t, _)| t)
            .ok()
            .map(|i| range[i].2)
    }

    /// Distinct successors of `node`, ascending.
    pub fn successors(&self, node: usize) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.arcs[self.out_offsets[node]..self.out_offsets[node + 1]]
            .iter()
            .map(|&(_, t, _)| t)
    }

    /// Distinct predecessors of `node`, ascending.
    pub fn predecessors(&self, node: usize) -> &[usize] {
        &self.in_sources[self.in_offsets[node]..self.in_offsets[node + 1]]
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.out_offsets[node + 1] - self.out_offsets[node]
    }

    pub fn in_degree(&self, node: usize) -> usize {
        self.in_offsets[node + 1] - self.in_offsets[node]
    }

    pub fn summary(&self) -> GraphSummary {
        GraphSummary {
            n: self.node_count(),
            m: self.arc_count(),
            total_weight: self.total_weight,
            self_loops: self.self_loops,
        }
    }

    /// Edge-list CSV with header `source,target,weight`, sorted by label.
    pub fn write_edge_list<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let res = (|| -> std::result::Result<(), csv::Error> {
            wtr.write_record(["source", "target", "weight"])?;
            for &(s, t, weight) in &self.arcs {
                wtr.write_record([&self.labels[s], &self.labels[t], &weight.to_string()])?;
            }
            wtr.flush()?;
            Ok(())
        })();
        res.map_err(|e| Error::Invalid(format!("edge list export: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub m: usize,
    pub total_weight: u64,
    pub self_loops: u64,
}

/// Accumulates arc counts. Merging builders is commutative, so per-chunk
/// builders can be combined in any order.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    ids: HashMap<String, u32>,
    names: Vec<String>,
    counts: HashMap<(u32, u32), u64>,
    self_loops: u64,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, label: &str) -> u32 {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.push(label.to_owned());
        self.ids.insert(label.to_owned(), id);
        id
    }

    pub fn add_arc(&mut self, source: &str, target: &str, weight: u64) {
        let s = self.add_node(source);
        let t = self.add_node(target);
        self.add_arc_ids(s, t, weight);
    }

    fn add_arc_ids(&mut self, s: u32, t: u32, weight: u64) {
        if weight == 0 {
            return;
        }
        if s == t {
            self.self_loops += weight;
        } else {
            *self.counts.entry((s, t)).or_insert(0) += weight;
        }
    }

    pub fn merge(mut self, other: GraphBuilder) -> GraphBuilder {
        let remap: Vec<u32> = other.names.iter().map(|l| self.add_node(l)).collect();
        for ((s, t), w) in other.counts {
            self.add_arc_ids(remap[s as usize], remap[t as usize], w);
        }
        self.self_loops += other.self_loops;
        self
    }

    pub fn build(self) -> DirectedWeightedGraph {
        let mut order: Vec<u32> = (0..self.names.len() as u32).collect();
        order.sort_unstable_by(|&a, &b| self.names[a as usize].cmp(&self.names[b as usize]));
        let mut rank = vec![0usize; order.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old as usize] = new;
        }
        let n = order.len();
        let mut arcs: Vec<(usize, usize, u64)> = self
            .counts
            .into_iter()
            .map(|((s, t), w)| (rank[s as usize], rank[t as usize], w))
            .collect();
        arcs.sort_unstable_by_key(|&(s, t, _)| (s, t));

        let mut out_offsets = vec![0usize; n + 1];
        let mut in_offsets = vec![0usize; n + 1];
        for &(s, t, _) in &arcs {
            out_offsets[s + 1] += 1;
            in_offsets[t + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
            in_offsets[i + 1] += in_offsets[i];
        }
        // arcs are sorted by source, so each in-list fills in ascending order
        let mut fill = in_offsets.clone();
        let mut in_sources = vec![0usize; arcs.len()];
        for &(s, t, _) in &arcs {
            in_sources[fill[t]] = s;
            fill[t] += 1;
        }

        let mut names = self.names;
        let labels: Vec<String> = order
            .iter()
            .map(|&old| std::mem::take(&mut names[old as usize]))
            .collect();
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        let total_weight = arcs.iter().map(|a| a.2).sum();
        DirectedWeightedGraph {
            labels,
            index,
            arcs,
            out_offsets,
            in_offsets,
            in_sources,
            total_weight,
            self_loops: self.self_loops,
        }
    }
}

/// Message id → (author, timestamp), used to resolve reply targets across
/// window boundaries.
#[derive(Debug, Clone, Default)]
pub struct ParentIndex {
    by_id: HashMap<String, (String, DateTime<Utc>)>,
}

impl ParentIndex {
    pub fn from_messages<'a>(messages: impl IntoIterator<Item = &'a Message>) -> Self {
        ParentIndex {
            by_id: messages
                .into_iter()
                .map(|m| (m.id.clone(), (m.author_id.clone(), m.timestamp)))
                .collect(),
        }
    }

    /// Author of `reply`'s parent, unless the parent is unknown or
    /// postdates the reply.
    pub fn parent_author(&self, reply: &Message) -> Option<&str> {
        let parent = reply.parent_id.as_deref()?;
        let (author, ts) = self.by_id.get(parent)?;
        (*ts <= reply.timestamp).then_some(author.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionNetwork {
    pub graph: DirectedWeightedGraph,
    pub self_replies: u64,
    pub dangling_parents: u64,
}

/// Arc replier → parent author for every resolvable reply.
pub fn build_interaction_network(messages: &[Message], parents: &ParentIndex) -> InteractionNetwork {
    let mut b = GraphBuilder::new();
    let mut dangling = 0;
    for m in messages {
        b.add_node(&m.author_id);
        if m.parent_id.is_none() {
            continue;
        }
        match parents.parent_author(m) {
            Some(author) => b.add_arc(&m.author_id, author, 1),
            None => {
                log::debug!("message {} has a dangling parent", m.id);
                dangling += 1;
            }
        }
    }
    let graph = b.build();
    InteractionNetwork {
        self_replies: graph.self_loops(),
        dangling_parents: dangling,
        graph,
    }
}

/// Ordered co-occurrence arcs `t_i → t_j` for `0 < j − i ≤ window_size`
/// within each stream.
pub fn build_word_network(streams: &[Vec<String>], window_size: usize) -> Result<DirectedWeightedGraph> {
    if window_size == 0 {
        return Err(Error::Invalid("co-occurrence window must be at least 1".into()));
    }
    let mut b = GraphBuilder::new();
    let mut ids = Vec::new();
    for stream in streams {
        ids.clear();
        ids.extend(stream.iter().map(|t| b.add_node(t)));
        for (i, &s) in ids.iter().enumerate() {
            for &t in ids.iter().skip(i + 1).take(window_size) {
                b.add_arc_ids(s, t, 1);
            }
        }
    }
    Ok(b.build())
}

pub fn activity(messages: &[Message]) -> u64 {
    messages.len() as u64
}

/// Every co-occurrence event, repeats included.
pub fn activity_words(word_graph: &DirectedWeightedGraph) -> u64 {
    word_graph.total_weight()
}
