//! Degree, closeness, betweenness and PageRank.
//!
//! Geodesics are hop counts along arc direction. Per-source passes run in
//! parallel; betweenness sums fixed-size blocks of sources in index order so
//! the result does not depend on the number of worker threads.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, Direction, Graph};
use crate::util::{compensated_sum, fmt_sig};

/// Which arcs count towards degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeMode {
    Out,
    In,
    /// Distinct neighbours over both directions.
    Total,
}

/// Number of distinct neighbours of every node.
pub fn degree_centrality(g: &Graph, mode: DegreeMode) -> Vec<f64> {
    (0..g.node_count())
        .map(|v| match mode {
            DegreeMode::Out => g.out_arcs(v).len(),
            DegreeMode::In => g.in_arcs(v).len(),
            DegreeMode::Total => union_len(g.out_arcs(v), g.in_arcs(v)),
        } as f64)
        .collect()
}

// Both lists are sorted by neighbour index.
fn union_len(a: &[(usize, f64)], b: &[(usize, f64)]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
        count += 1;
    }
    count + (a.len() - i) + (b.len() - j)
}

/// `1 / Σ d(v, u)` over the nodes `u` reachable from `v`; 0 when `v` reaches nothing.
pub fn closeness_centrality(g: &Graph) -> Vec<f64> {
    (0..g.node_count())
        .into_par_iter()
        .map(|v| {
            let dist = bfs_distances(g, v, Direction::Out).expect("valid source");
            let total: u64 = dist.iter().flatten().map(|&d| d as u64).sum();
            if total == 0 {
                0.0
            } else {
                1.0 / total as f64
            }
        })
        .collect()
}

const SOURCE_BLOCK: usize = 32;

/// Unnormalized betweenness over directed hop-count geodesics (Brandes).
///
/// Ordered pairs `(s, t)` are counted separately, so an undirected path
/// `a - b - c` gives `b` a score of 2.
pub fn betweenness_centrality(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let blocks: Vec<Vec<f64>> = (0..n.div_ceil(SOURCE_BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut acc = vec![0.0; n];
            let mut scratch = BrandesScratch::new(n);
            for s in b * SOURCE_BLOCK..((b + 1) * SOURCE_BLOCK).min(n) {
                scratch.accumulate(g, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut bc = vec![0.0; n];
    for block in blocks {
        for (total, part) in bc.iter_mut().zip(block) {
            *total += part;
        }
    }
    bc
}

struct BrandesScratch {
    sigma: Vec<f64>,
    dist: Vec<i64>,
    delta: Vec<f64>,
    order: Vec<usize>,
    queue: VecDeque<usize>,
}

impl BrandesScratch {
    fn new(n: usize) -> Self {
        BrandesScratch {
            sigma: vec![0.0; n],
            dist: vec![-1; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::new(),
        }
    }

    fn accumulate(&mut self, g: &Graph, s: usize, bc: &mut [f64]) {
        self.sigma.fill(0.0);
        self.dist.fill(-1);
        self.delta.fill(0.0);
        self.order.clear();
        self.sigma[s] = 1.0;
        self.dist[s] = 0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            for &(w, _) in g.out_arcs(v) {
                if self.dist[w] < 0 {
                    self.dist[w] = self.dist[v] + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w] == self.dist[v] + 1 {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }
        // Predecessors of w are the in-neighbours one level closer to s.
        for &w in self.order.iter().rev() {
            for &(v, _) in g.in_arcs(w) {
                if self.dist[v] >= 0 && self.dist[v] + 1 == self.dist[w] {
                    self.delta[v] += self.sigma[v] / self.sigma[w] * (1.0 + self.delta[w]);
                }
            }
            if w != s {
                bc[w] += self.delta[w];
            }
        }
    }
}

/// Weighted PageRank by power iteration.
///
/// Node `i` passes `damping * pr(i)` to its out-neighbours in proportion to
/// arc weight; dangling nodes spread theirs uniformly; every node receives
/// `(1 - damping) / n`. Stops once the L1 change drops below `tol`.
pub fn pagerank(g: &Graph, damping: f64, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    if !(damping > 0.0 && damping < 1.0) {
        return Err(Error::invalid(format!("damping {damping} must lie in (0, 1)")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid(format!("tolerance {tol} must be > 0")));
    }
    let n = g.node_count();
    let nf = n as f64;
    let strength: Vec<f64> = (0..n)
        .map(|v| compensated_sum(g.out_arcs(v).iter().map(|a| a.1)))
        .collect();
    let dangling: Vec<usize> = (0..n).filter(|&v| g.out_arcs(v).is_empty()).collect();
    let mut pr = vec![1.0 / nf; n];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let dangling_mass = compensated_sum(dangling.iter().map(|&v| pr[v]));
        let base = (1.0 - damping) / nf + damping * dangling_mass / nf;
        let next: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let inflow = compensated_sum(g.in_arcs(i).iter().map(|&(j, w)| pr[j] * w / strength[j]));
                base + damping * inflow
            })
            .collect();
        residual = compensated_sum(next.iter().zip(&pr).map(|(a, b)| (a - b).abs()));
        pr = next;
        if residual < tol {
            let total = compensated_sum(pr.iter().copied());
            pr.iter_mut().for_each(|p| *p /= total);
            return Ok(pr);
        }
    }
    Err(Error::PageRankNotConverged {
        iterations: max_iter,
        residual,
        last: pr,
    })
}

/// Settings for [`centrality_table_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralityOptions {
    /// `None` picks `Total` for symmetric graphs and `Out` otherwise.
    pub degree_mode: Option<DegreeMode>,
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for CentralityOptions {
    fn default() -> Self {
        CentralityOptions {
            degree_mode: None,
            damping: 0.85,
            tol: 1e-10,
            max_iter: 200,
        }
    }
}

/// The four centrality measures of every node; rows of a TOPSIS matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityTable {
    pub labels: Vec<String>,
    pub dc: Vec<f64>,
    pub cc: Vec<f64>,
    pub bc: Vec<f64>,
    pub pr: Vec<f64>,
}

pub const CRITERIA: [&str; 4] = ["dc", "cc", "bc", "pr"];

impl CentralityTable {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Columns in `CRITERIA` order.
    pub fn columns(&self) -> [&[f64]; 4] {
        [&self.dc, &self.cc, &self.bc, &self.pr]
    }

    pub fn row(&self, i: usize) -> [f64; 4] {
        [self.dc[i], self.cc[i], self.bc[i], self.pr[i]]
    }

    /// `node,dc,cc,bc,pr` with 9 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node,dc,cc,bc,pr\n");
        for i in 0..self.len() {
            out.push_str(&self.labels[i]);
            for v in self.row(i) {
                out.push(',');
                out.push_str(&fmt_sig(v, 9));
            }
            out.push('\n');
        }
        out
    }
}

pub fn centrality_table(g: &Graph) -> Result<CentralityTable> {
    centrality_table_with(g, &CentralityOptions::default())
}

pub fn centrality_table_with(g: &Graph, opts: &CentralityOptions) -> Result<CentralityTable> {
    let mode = opts.degree_mode.unwrap_or(if g.is_symmetric() {
        DegreeMode::Total
    } else {
        DegreeMode::Out
    });
    Ok(CentralityTable {
        labels: g.labels().to_vec(),
        dc: degree_centrality(g, mode),
        cc: closeness_centrality(g),
        bc: betweenness_centrality(g),
        pr: pagerank(g, opts.damping, opts.tol, opts.max_iter)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    fn undirected(text: &str) -> Graph {
        parse_edge_list(text.as_bytes(), false, true).unwrap().0
    }

    fn directed(text: &str) -> Graph {
        parse_edge_list(text.as_bytes(), true, true).unwrap().0
    }

    #[test]
    fn degree_of_star_and_path() {
        let star = undirected("c s1\nc s2\nc s3\nc s4\n");
        assert_eq!(
            degree_centrality(&star, DegreeMode::Total),
            vec![4.0, 1.0, 1.0, 1.0, 1.0]
        );
        let path = directed("1 2\n2 3\n");
        assert_eq!(degree_centrality(&path, DegreeMode::Out), vec![1.0, 1.0, 0.0]);
        assert_eq!(degree_centrality(&path, DegreeMode::In), vec![0.0, 1.0, 1.0]);
        assert_eq!(degree_centrality(&path, DegreeMode::Total), vec![1.0, 2.0, 1.0]);
    }

    #[test]
    fn closeness_of_path_and_isolated() {
        let g = undirected("a b\nb c\n");
        assert_eq!(closeness_centrality(&g), vec![1.0 / 3.0, 0.5, 1.0 / 3.0]);
        let g = parse_edge_list("x y\nz z\n".as_bytes(), true, true).unwrap().0;
        assert_eq!(closeness_centrality(&g)[2], 0.0);
        assert_eq!(closeness_centrality(&g)[1], 0.0);
    }

    #[test]
    fn betweenness_small_cases() {
        let path = undirected("a b\nb c\n");
        assert_eq!(betweenness_centrality(&path), vec![0.0, 2.0, 0.0]);
        let cycle = undirected("1 2\n2 3\n3 4\n4 1\n");
        assert_eq!(betweenness_centrality(&cycle), vec![1.0; 4]);
        let k4 = undirected("1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n");
        assert_eq!(betweenness_centrality(&k4), vec![0.0; 4]);
    }

    #[test]
    fn pagerank_symmetric_cases() {
        let g = directed("a b\nb a\n");
        let pr = pagerank(&g, 0.85, 1e-12, 200).unwrap();
        assert!((pr[0] - 0.5).abs() < 1e-12 && (pr[1] - 0.5).abs() < 1e-12);
        let ring = directed("1 2\n2 3\n3 4\n4 5\n5 1\n");
        for p in pagerank(&ring, 0.85, 1e-12, 200).unwrap() {
            assert!((p - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn pagerank_errors() {
        let g = directed("a b\nb c\nc a\na c\n");
        assert!(pagerank(&g, 1.0, 1e-9, 10).is_err());
        assert!(pagerank(&g, 0.85, 0.0, 10).is_err());
        match pagerank(&g, 0.85, 1e-300, 3) {
            Err(Error::PageRankNotConverged { iterations, last, .. }) => {
                assert_eq!(iterations, 3);
                assert_eq!(last.len(), 3);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn single_node_table() {
        let g = parse_edge_list("a a\n".as_bytes(), true, true).unwrap().0;
        let t = centrality_table(&g).unwrap();
        assert_eq!(t.row(0), [0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn path_middle_dominates() {
        let g = undirected("a b\nb c\n");
        let t = centrality_table(&g).unwrap();
        for other in [0, 2] {
            let (b, o) = (t.row(1), t.row(other));
            assert!(b.iter().zip(&o).all(|(x, y)| x > y), "{b:?} vs {o:?}");
        }
        assert_eq!(t.columns().map(|c| c.len()), [3; 4]);
    }

    #[test]
    fn csv_header_and_rows() {
        let g = undirected("a b\n");
        let csv = centrality_table(&g).unwrap().to_csv();
        assert_eq!(csv, "node,dc,cc,bc,pr\na,1,1,0,0.5\nb,1,1,0,0.5\n");
    }
}
