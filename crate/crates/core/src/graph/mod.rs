//! Directed weighted graph with stable string labels.

mod io;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::label_cmp;

pub use io::{parse_edge_list, parse_pajek, read_graph_file, GraphFormat};

/// Counters collected while ingesting a graph.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestReport {
    pub arcs_read: usize,
    pub arcs_merged: usize,
    pub self_loops_dropped: usize,
    pub was_symmetrized: bool,
    /// Maximum weight before normalization; 1.0 until `normalize_weights` runs.
    pub weight_scale: f64,
}

/// Direction in which arcs are followed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
}

/// Immutable directed graph.
///
/// Nodes are dense indices `0..n`; each carries a unique label. Arcs are
/// stored twice, as sorted out- and in-adjacency lists. There are no self
/// loops, no parallel arcs, and every weight is finite and positive.
#[derive(Debug, Clone)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    /// Position of each node in `label_cmp` order.
    label_rank: Vec<usize>,
    out_adj: Vec<Vec<(usize, f64)>>,
    in_adj: Vec<Vec<(usize, f64)>>,
    arc_count: usize,
    symmetric: bool,
}

impl Graph {
    /// Builds a graph from labels and already-clean arcs.
    ///
    /// Arcs must reference valid indices, contain no self loops or duplicates,
    /// and carry finite positive weights.
    pub(crate) fn from_clean_arcs(labels: Vec<String>, arcs: Vec<(usize, usize, f64)>) -> Graph {
        let n = labels.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(s, t, w) in &arcs {
            debug_assert!(s != t && w.is_finite() && w > 0.0);
            out_adj[s].push((t, w));
            in_adj[t].push((s, w));
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_by_key(|&(v, _)| v);
        }
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| label_cmp(&labels[a], &labels[b]));
        let mut label_rank = vec![0; n];
        for (rank, &node) in order.iter().enumerate() {
            label_rank[node] = rank;
        }
        let symmetric = out_adj.iter().enumerate().all(|(s, list)| {
            list.iter().all(|&(t, w)| {
                out_adj[t]
                    .binary_search_by_key(&s, |&(v, _)| v)
                    .map(|pos| out_adj[t][pos].1 == w)
                    .unwrap_or(false)
            })
        });
        Graph {
            labels,
            index,
            label_rank,
            out_adj,
            in_adj,
            arc_count: arcs.len(),
            symmetric,
        }
    }

    /// Builds a graph from labelled arcs, merging duplicates by weight sum
    /// and dropping self loops. Nodes get indices in first-seen order.
    pub fn from_labeled_arcs<'a, I>(arcs: I) -> Result<(Graph, IngestReport)>
    where
        I: IntoIterator<Item = (&'a str, &'a str, f64)>,
    {
        let mut builder = GraphBuilder::default();
        for (s, t, w) in arcs {
            let s = builder.node(s);
            let t = builder.node(t);
            builder.arc(s, t, w)?;
        }
        builder.finish()
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    /// True when every arc `(i, j, w)` has a reverse arc `(j, i, w)`.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_index(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require_node(&self, label: &str) -> Result<usize> {
        self.node_index(label)
            .ok_or_else(|| Error::UnknownNode(label.to_string()))
    }

    /// Rank of the node's label under [`label_cmp`]; the tie-break key.
    pub fn label_rank(&self, node: usize) -> usize {
        self.label_rank[node]
    }

    pub fn out_arcs(&self, node: usize) -> &[(usize, f64)] {
        &self.out_adj[node]
    }

    pub fn in_arcs(&self, node: usize) -> &[(usize, f64)] {
        &self.in_adj[node]
    }

    pub fn arcs_from(&self, node: usize, direction: Direction) -> &[(usize, f64)] {
        match direction {
            Direction::Out => self.out_arcs(node),
            Direction::In => self.in_arcs(node),
        }
    }

    /// All arcs as `(src, dst, weight)`, ordered by source then destination index.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(s, list)| list.iter().map(move |&(t, w)| (s, t, w)))
    }

    pub fn max_weight(&self) -> Option<f64> {
        self.arcs().map(|(_, _, w)| w).reduce(f64::max)
    }

    /// Canonical edge-list text: `src<TAB>dst<TAB>weight`, sorted by labels,
    /// weights with 9 significant digits. A symmetric graph lists each edge
    /// once, which reads back unchanged as an undirected edge list.
    pub fn to_edge_list(&self) -> String {
        let mut arcs: Vec<(usize, usize, f64)> = self
            .arcs()
            .filter(|&(s, t, _)| !self.symmetric || self.label_rank[s] < self.label_rank[t])
            .collect();
        arcs.sort_by(|a, b| {
            self.label_rank[a.0]
                .cmp(&self.label_rank[b.0])
                .then(self.label_rank[a.1].cmp(&self.label_rank[b.1]))
        });
        let mut out = String::new();
        for (s, t, w) in arcs {
            out.push_str(&self.labels[s]);
            out.push('\t');
            out.push_str(&self.labels[t]);
            out.push('\t');
            out.push_str(&crate::util::fmt_sig(w, 9));
            out.push('\n');
        }
        out
    }
}

/// Accumulates labelled arcs and applies the ingest rules.
#[derive(Debug, Default)]
pub(crate) struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    arcs: HashMap<(usize, usize), usize>,
    arc_list: Vec<(usize, usize, f64)>,
    report: IngestReport,
}

impl GraphBuilder {
    pub(crate) fn node(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), i);
        i
    }

    pub(crate) fn count_record(&mut self) {
        self.report.arcs_read += 1;
    }

    pub(crate) fn mark_symmetrized(&mut self) {
        self.report.was_symmetrized = true;
    }

    pub(crate) fn arc(&mut self, s: usize, t: usize, w: f64) -> Result<()> {
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::invalid(format!("arc weight {w} must be finite and > 0")));
        }
        if s == t {
            self.report.self_loops_dropped += 1;
            return Ok(());
        }
        match self.arcs.get(&(s, t)) {
            Some(&pos) => {
                self.arc_list[pos].2 += w;
                self.report.arcs_merged += 1;
            }
            None => {
                self.arcs.insert((s, t), self.arc_list.len());
                self.arc_list.push((s, t, w));
            }
        }
        Ok(())
    }

    pub(crate) fn finish(self) -> Result<(Graph, IngestReport)> {
        if self.labels.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut report = self.report;
        report.weight_scale = 1.0;
        Ok((Graph::from_clean_arcs(self.labels, self.arc_list), report))
    }
}

/// Divides every weight by the maximum weight. Returns the graph and the
/// scale that was divided out (1.0 for a graph without arcs).
pub fn normalize_weights(g: &Graph) -> (Graph, f64) {
    let scale = match g.max_weight() {
        Some(m) => m,
        None => return (g.clone(), 1.0),
    };
    let arcs = g.arcs().map(|(s, t, w)| (s, t, w / scale)).collect();
    (Graph::from_clean_arcs(g.labels.clone(), arcs), scale)
}

/// Graph on exactly `nodes` (in the given order) with every arc whose
/// endpoints both lie in `nodes`. Labels and weights are preserved.
pub fn induced_subgraph(g: &Graph, nodes: &[usize]) -> Result<Graph> {
    let mut local = vec![usize::MAX; g.node_count()];
    for (i, &v) in nodes.iter().enumerate() {
        if v >= g.node_count() {
            return Err(Error::UnknownNode(format!("#{v}")));
        }
        if local[v] != usize::MAX {
            return Err(Error::invalid(format!(
                "node `{}` listed twice in subgraph",
                g.label(v)
            )));
        }
        local[v] = i;
    }
    let labels = nodes.iter().map(|&v| g.labels[v].clone()).collect();
    let mut arcs = Vec::new();
    for &v in nodes {
        for &(t, w) in g.out_arcs(v) {
            if local[t] != usize::MAX {
                arcs.push((local[v], local[t], w));
            }
        }
    }
    Ok(Graph::from_clean_arcs(labels, arcs))
}

/// Like [`induced_subgraph`], addressing nodes by label.
pub fn induced_subgraph_by_label<S: AsRef<str>>(g: &Graph, labels: &[S]) -> Result<Graph> {
    let nodes = labels
        .iter()
        .map(|l| g.require_node(l.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    induced_subgraph(g, &nodes)
}

/// Hop-count distances from `source`; `None` marks unreachable nodes.
pub fn bfs_distances(g: &Graph, source: usize, direction: Direction) -> Result<Vec<Option<u32>>> {
    if source >= g.node_count() {
        return Err(Error::UnknownNode(format!("#{source}")));
    }
    let mut dist = vec![None; g.node_count()];
    let mut queue = VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap() + 1;
        for &(t, _) in g.arcs_from(v, direction) {
            if dist[t].is_none() {
                dist[t] = Some(d);
                queue.push_back(t);
            }
        }
    }
    Ok(dist)
}
