//! Experiment orchestration: seed-set overlap, diffusion speed, grid sweeps
//! over `(K, kappa)` and report files.

mod generator;
mod report;

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::centrality::centrality_table;
use crate::community::CommunityOptions;
use crate::epidemic::{simulate, SirConfig};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seeding::{baseline_from_table, gtacb_seeds, Method, SeedSet};
use crate::util::{compensated_sum, derive_seed};

pub use generator::generate_modular_graph;

/// `|a ∩ b| / |a ∪ b|`.
pub fn jaccard(a: &SeedSet, b: &SeedSet) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("Jaccard coefficient of an empty seed set"));
    }
    let a: HashSet<usize> = a.nodes.iter().copied().collect();
    let b: HashSet<usize> = b.nodes.iter().copied().collect();
    let inter = a.intersection(&b).count();
    let union = a.len() + b.len() - inter;
    Ok(inter as f64 / union as f64)
}

/// Pairwise Jaccard coefficients; requires at least two sets of equal size.
pub fn jaccard_matrix(sets: &[SeedSet]) -> Result<Vec<Vec<f64>>> {
    if sets.len() < 2 {
        return Err(Error::invalid("Jaccard matrix needs at least two seed sets"));
    }
    let k = sets[0].len();
    if let Some(s) = sets.iter().find(|s| s.len() != k) {
        return Err(Error::SeedSizeMismatch(k, s.len()));
    }
    let m = sets.len();
    let mut out = vec![vec![1.0; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let v = jaccard(&sets[i], &sets[j])?;
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    Ok(out)
}

/// Newly infected nodes per period, `(gamma - K) / tau`.
pub fn diffusion_speed(gamma: f64, k: usize, tau: f64) -> Result<f64> {
    if tau.is_nan() || tau <= 0.0 {
        return Err(Error::invalid(format!("tau {tau} must be > 0")));
    }
    Ok((gamma - k as f64) / tau)
}

/// A `(method, K, kappa)` sweep on one graph.
#[derive(Debug, Clone)]
pub struct ExperimentGrid {
    pub methods: Vec<Method>,
    pub k_values: Vec<usize>,
    pub kappa_values: Vec<f64>,
    /// Template for every cell; `kappa` and `rng_seed` are overwritten.
    pub sir: SirConfig,
    pub community: CommunityOptions,
    pub weights: Option<Vec<f64>>,
}

impl ExperimentGrid {
    fn validate(&self, g: &Graph) -> Result<()> {
        if self.methods.is_empty() || self.k_values.is_empty() || self.kappa_values.is_empty() {
            return Err(Error::invalid("methods, K values and kappa values must be non-empty"));
        }
        if let Some(&k) = self.k_values.iter().find(|&&k| k < 1 || k > g.node_count()) {
            return Err(Error::invalid(format!("K={k} must lie in 1..={}", g.node_count())));
        }
        let mut cfg = self.sir.clone();
        for &kappa in &self.kappa_values {
            cfg.kappa = kappa;
            cfg.validate()?;
        }
        Ok(())
    }
}

/// One simulated cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellRecord {
    pub method: Method,
    #[serde(rename = "K")]
    pub k: usize,
    pub kappa: f64,
    pub gamma_mean: f64,
    pub gamma_std: f64,
    pub gamma_pct: f64,
    pub tau_mean: f64,
    pub tau_std: f64,
    pub eta: f64,
}

/// Grid means of one method over all its cells.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSummary {
    pub method: Method,
    pub gamma_mean: f64,
    pub gamma_pct: f64,
    pub tau_mean: f64,
    pub eta: f64,
}

/// Pairwise seed overlap of all methods for one `K`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JaccardTable {
    #[serde(rename = "K")]
    pub k: usize,
    pub methods: Vec<Method>,
    pub matrix: Vec<Vec<f64>>,
}

/// Seeds chosen by one method for one `K`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedRecord {
    pub method: Method,
    #[serde(rename = "K")]
    pub k: usize,
    pub seeds: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub node_count: usize,
    pub records: Vec<CellRecord>,
    pub summaries: Vec<MethodSummary>,
    /// Empty when the grid has a single method.
    pub jaccard: Vec<JaccardTable>,
    pub seeds: Vec<SeedRecord>,
}

/// Random stream for a cell. It depends on `K` and the kappa position but not
/// on the method, so all methods in a cell see common random numbers.
pub fn cell_seed(base: u64, k: usize, kappa_index: usize) -> u64 {
    derive_seed(base, &[k as u64, kappa_index as u64])
}

/// Selects seeds once per `(method, K)`, simulates every `(method, K, kappa)`
/// cell, and summarizes.
pub fn run_experiment_grid(g: &Graph, grid: &ExperimentGrid) -> Result<ExperimentReport> {
    grid.validate(g)?;
    let weights = grid.weights.as_deref();
    let needs_table = grid.methods.iter().any(|&m| m != Method::Gtacb);
    let table = if needs_table { Some(centrality_table(g)?) } else { None };
    let pairs: Vec<(Method, usize)> = grid
        .methods
        .iter()
        .flat_map(|&m| grid.k_values.iter().map(move |&k| (m, k)))
        .collect();
    let seed_sets: Vec<SeedSet> = pairs
        .par_iter()
        .map(|&(method, k)| {
            let seeds = match method {
                Method::Gtacb => gtacb_seeds(g, k, weights, &grid.community),
                m => baseline_from_table(g, table.as_ref().expect("table"), k, m, weights),
            };
            seeds.map_err(|e| cell_error(method, k, f64::NAN, e))
        })
        .collect::<Result<_>>()?;

    let cells: Vec<(usize, usize)> = (0..pairs.len())
        .flat_map(|p| (0..grid.kappa_values.len()).map(move |q| (p, q)))
        .collect();
    let n = g.node_count() as f64;
    let records: Vec<CellRecord> = cells
        .par_iter()
        .map(|&(p, q)| {
            let (method, k) = pairs[p];
            let kappa = grid.kappa_values[q];
            let cfg = SirConfig {
                kappa,
                rng_seed: cell_seed(grid.sir.rng_seed, k, q),
                ..grid.sir.clone()
            };
            let out = simulate(g, &seed_sets[p].nodes, &cfg).map_err(|e| cell_error(method, k, kappa, e))?;
            let eta = diffusion_speed(out.gamma_mean, k, out.tau_mean).map_err(|e| cell_error(method, k, kappa, e))?;
            Ok(CellRecord {
                method,
                k,
                kappa,
                gamma_mean: out.gamma_mean,
                gamma_std: out.gamma_std,
                gamma_pct: out.gamma_mean / n,
                tau_mean: out.tau_mean,
                tau_std: out.tau_std,
                eta,
            })
        })
        .collect::<Result<_>>()?;

    let summaries = grid
        .methods
        .iter()
        .map(|&method| {
            let mine: Vec<&CellRecord> = records.iter().filter(|r| r.method == method).collect();
            let mean = |f: fn(&CellRecord) -> f64| compensated_sum(mine.iter().map(|r| f(r))) / mine.len() as f64;
            MethodSummary {
                method,
                gamma_mean: mean(|r| r.gamma_mean),
                gamma_pct: mean(|r| r.gamma_pct),
                tau_mean: mean(|r| r.tau_mean),
                eta: mean(|r| r.eta),
            }
        })
        .collect();

    let mut jaccard = Vec::new();
    if grid.methods.len() >= 2 {
        for (ki, &k) in grid.k_values.iter().enumerate() {
            let sets: Vec<SeedSet> = (0..grid.methods.len())
                .map(|mi| seed_sets[mi * grid.k_values.len() + ki].clone())
                .collect();
            jaccard.push(JaccardTable {
                k,
                methods: grid.methods.clone(),
                matrix: jaccard_matrix(&sets)?,
            });
        }
    }

    let seeds = pairs
        .iter()
        .zip(&seed_sets)
        .map(|(&(method, k), s)| SeedRecord {
            method,
            k,
            seeds: s.labels(g).into_iter().map(String::from).collect(),
        })
        .collect();

    Ok(ExperimentReport {
        node_count: g.node_count(),
        records,
        summaries,
        jaccard,
        seeds,
    })
}

fn cell_error(method: Method, k: usize, kappa: f64, e: Error) -> Error {
    Error::Cell {
        method: method.to_string(),
        k,
        kappa,
        source: Box::new(e),
    }
}
