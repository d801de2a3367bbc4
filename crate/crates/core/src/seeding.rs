//! Seed-set construction: the community-based TOPSIS method and the
//! single-measure baselines.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centrality::{centrality_table, CentralityTable, CRITERIA};
use crate::community::{detect_communities, CommunityOptions, Partition};
use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, Graph};
use crate::madm::{by_score_desc, topsis_rank, Criterion, DecisionMatrix, TopsisRanking};

/// Seed selection methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Gtacb,
    Dc,
    Cc,
    Bc,
    Pr,
    Topsis,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Gtacb,
        Method::Dc,
        Method::Cc,
        Method::Bc,
        Method::Pr,
        Method::Topsis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Gtacb => "gtacb",
            Method::Dc => "dc",
            Method::Cc => "cc",
            Method::Bc => "bc",
            Method::Pr => "pr",
            Method::Topsis => "topsis",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown method `{s}` (expected one of gtacb, dc, cc, bc, pr, topsis)"
                ))
            })
    }
}

/// `K` distinct seed nodes with the method that picked them.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedSet {
    pub method: String,
    pub nodes: Vec<usize>,
    /// Community index of each seed (community-based selection only).
    pub communities: Option<Vec<usize>>,
    /// Score each seed was ranked by.
    pub scores: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct SeedSetJson {
    method: String,
    #[serde(rename = "K")]
    k: usize,
    seeds: Vec<String>,
    #[serde(default)]
    params: serde_json::Value,
}

impl SeedSet {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn labels<'g>(&self, g: &'g Graph) -> Vec<&'g str> {
        self.nodes.iter().map(|&v| g.label(v)).collect()
    }

    /// Builds a seed set from labels, rejecting unknown and repeated nodes.
    pub fn from_labels<S: AsRef<str>>(g: &Graph, method: &str, labels: &[S]) -> Result<SeedSet> {
        let mut seen = HashSet::new();
        let mut nodes = Vec::with_capacity(labels.len());
        for l in labels {
            let v = g.require_node(l.as_ref())?;
            if !seen.insert(v) {
                return Err(Error::invalid(format!("seed `{}` listed twice", l.as_ref())));
            }
            nodes.push(v);
        }
        if nodes.is_empty() {
            return Err(Error::invalid("seed set is empty"));
        }
        Ok(SeedSet {
            method: method.to_string(),
            scores: vec![f64::NAN; nodes.len()],
            nodes,
            communities: None,
        })
    }

    /// `{method, K, seeds, params}`.
    pub fn to_json(&self, g: &Graph, params: serde_json::Value) -> String {
        let doc = SeedSetJson {
            method: self.method.clone(),
            k: self.len(),
            seeds: self.labels(g).into_iter().map(String::from).collect(),
            params,
        };
        serde_json::to_string_pretty(&doc).expect("seed set serializes")
    }

    /// Accepts the JSON form or plain text with one label per line.
    pub fn parse(text: &str, g: &Graph) -> Result<SeedSet> {
        if text.trim_start().starts_with('{') {
            let doc: SeedSetJson = serde_json::from_str(text)?;
            if doc.k != doc.seeds.len() {
                return Err(Error::invalid(format!(
                    "seed file declares K={} but lists {} seeds",
                    doc.k,
                    doc.seeds.len()
                )));
            }
            return SeedSet::from_labels(g, &doc.method, &doc.seeds);
        }
        let labels: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        SeedSet::from_labels(g, "external", &labels)
    }
}

/// Seeds per community: the first `K mod H` communities get `ceil(K/H)`,
/// the rest `floor(K/H)`.
pub fn allocation_quotas(k: usize, h: usize) -> Vec<usize> {
    assert!(h >= 1, "need at least one community");
    let (base, extra) = (k / h, k % h);
    (0..h).map(|p| base + usize::from(p < extra)).collect()
}

fn check_k(g: &Graph, k: usize) -> Result<()> {
    if k < 1 || k > g.node_count() {
        return Err(Error::invalid(format!("K={k} must lie in 1..={}", g.node_count())));
    }
    Ok(())
}

fn criterion_weights(weights: Option<&[f64]>) -> Result<[f64; 4]> {
    match weights {
        None => Ok([0.25; 4]),
        Some(w) if w.len() == 4 => Ok([w[0], w[1], w[2], w[3]]),
        Some(w) => Err(Error::invalid(format!(
            "expected 4 criterion weights (dc, cc, bc, pr), got {}",
            w.len()
        ))),
    }
}

/// TOPSIS over the four centrality measures, all benefit criteria.
///
/// A measure that is zero for every node (betweenness inside a clique, for
/// instance) cannot be normalized and carries no ranking information; it is
/// left out and the remaining weights are rescaled to sum to one.
pub fn rank_table(table: &CentralityTable, weights: Option<&[f64]>) -> Result<TopsisRanking> {
    let w = criterion_weights(weights)?;
    let columns = table.columns();
    let keep: Vec<usize> = (0..4)
        .filter(|&j| columns[j].iter().any(|&x| x != 0.0) && w[j] > 0.0)
        .collect();
    if keep.is_empty() {
        return Err(Error::ZeroCriterion(CRITERIA.join(",")));
    }
    let total: f64 = keep.iter().map(|&j| w[j]).sum();
    let criteria = keep
        .iter()
        .map(|&j| Criterion::benefit(CRITERIA[j], w[j] / total))
        .collect();
    let rows = (0..table.len())
        .map(|i| keep.iter().map(|&j| columns[j][i]).collect())
        .collect();
    let dm = DecisionMatrix::new(table.labels.clone(), criteria, rows)?;
    topsis_rank(&dm)
}

/// Ranks every community on its own induced subgraph.
fn community_rankings(g: &Graph, partition: &Partition, weights: Option<&[f64]>) -> Result<Vec<Vec<(usize, f64)>>> {
    partition
        .members()
        .par_iter()
        .map(|members| {
            let sub = induced_subgraph(g, members)?;
            let ranking = rank_table(&centrality_table(&sub)?, weights)?;
            Ok(ranking.entries.iter().map(|e| (members[e.row], e.c_star)).collect())
        })
        .collect()
}

/// Community-based TOPSIS seed selection with an existing partition.
///
/// Communities are visited in index order (decreasing size). Each takes the
/// top of its own ranking up to its quota; a community smaller than its quota
/// passes the shortfall on to the next one, wrapping around once.
pub fn gtacb_seeds_with_partition(
    g: &Graph,
    k: usize,
    weights: Option<&[f64]>,
    partition: &Partition,
) -> Result<SeedSet> {
    check_k(g, k)?;
    if partition.node_count() != g.node_count() {
        return Err(Error::Partition("partition does not cover the graph".into()));
    }
    let rankings = community_rankings(g, partition, weights)?;
    let quotas = allocation_quotas(k, rankings.len());
    let mut taken = vec![0usize; rankings.len()];
    let mut seeds = SeedSet {
        method: Method::Gtacb.name().to_string(),
        nodes: Vec::with_capacity(k),
        communities: Some(Vec::with_capacity(k)),
        scores: Vec::with_capacity(k),
    };
    let mut carry = 0;
    for (c, ranking) in rankings.iter().enumerate() {
        let want = quotas[c] + carry;
        let got = want.min(ranking.len());
        carry = want - got;
        take(&mut seeds, ranking, c, &mut taken[c], got);
    }
    for (c, ranking) in rankings.iter().enumerate() {
        if carry == 0 {
            break;
        }
        let got = carry.min(ranking.len() - taken[c]);
        carry -= got;
        take(&mut seeds, ranking, c, &mut taken[c], got);
    }
    debug_assert_eq!(seeds.len(), k);
    Ok(seeds)
}

fn take(seeds: &mut SeedSet, ranking: &[(usize, f64)], c: usize, taken: &mut usize, count: usize) {
    for &(node, score) in &ranking[*taken..*taken + count] {
        seeds.nodes.push(node);
        seeds.scores.push(score);
        seeds.communities.as_mut().expect("community provenance").push(c);
    }
    *taken += count;
}

/// Detects `K` communities and selects seeds from them.
pub fn gtacb_seeds(g: &Graph, k: usize, weights: Option<&[f64]>, community: &CommunityOptions) -> Result<SeedSet> {
    check_k(g, k)?;
    let partition = detect_communities(g, k, community)?;
    gtacb_seeds_with_partition(g, k, weights, &partition)
}

/// Top-`K` nodes of the whole graph by a single measure or by TOPSIS.
pub fn baseline_seeds(g: &Graph, k: usize, method: Method, weights: Option<&[f64]>) -> Result<SeedSet> {
    check_k(g, k)?;
    let table = centrality_table(g)?;
    baseline_from_table(g, &table, k, method, weights)
}

/// As [`baseline_seeds`], reusing a precomputed table of `g`.
pub fn baseline_from_table(
    g: &Graph,
    table: &CentralityTable,
    k: usize,
    method: Method,
    weights: Option<&[f64]>,
) -> Result<SeedSet> {
    check_k(g, k)?;
    let ranked: Vec<(usize, f64)> = match method {
        Method::Gtacb => return Err(Error::invalid("gtacb is not a baseline; use gtacb_seeds")),
        Method::Topsis => rank_table(table, weights)?
            .entries
            .iter()
            .map(|e| (e.row, e.c_star))
            .collect(),
        Method::Dc | Method::Cc | Method::Bc | Method::Pr => {
            let col = match method {
                Method::Dc => &table.dc,
                Method::Cc => &table.cc,
                Method::Bc => &table.bc,
                _ => &table.pr,
            };
            let mut order: Vec<usize> = (0..g.node_count()).collect();
            order.sort_by(|&a, &b| by_score_desc((col[a], g.label(a)), (col[b], g.label(b))));
            order.into_iter().map(|v| (v, col[v])).collect()
        }
    };
    let top = &ranked[..k];
    Ok(SeedSet {
        method: method.name().to_string(),
        nodes: top.iter().map(|e| e.0).collect(),
        communities: None,
        scores: top.iter().map(|e| e.1).collect(),
    })
}

/// Seeds for any method; `community` only matters for `Gtacb`.
pub fn select_seeds(
    g: &Graph,
    k: usize,
    method: Method,
    weights: Option<&[f64]>,
    community: &CommunityOptions,
) -> Result<SeedSet> {
    match method {
        Method::Gtacb => gtacb_seeds(g, k, weights, community),
        other => baseline_seeds(g, k, other, weights),
    }
}
