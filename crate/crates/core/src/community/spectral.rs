//! Normalized spectral clustering with best-of-restarts k-means.
//!
//! The directed weights are symmetrized as `(W + Wᵀ) / 2` and degree
//! normalized, `M = D^-1/2 W D^-1/2`. The leading `k` eigenvectors of `M`
//! come from block subspace iteration on `M + I` (spectrum in `[0, 2]`), the
//! rows of the eigenvector block are scaled to unit length, and k-means
//! groups them. Each restart differs in its first initial centre; the restart
//! with the most non-empty clusters and then the lowest cut cost wins.

use rand::Rng;
use rayon::prelude::*;

use super::linalg::{orthonormalize, symmetric_eigen, Block};
use super::{cut_cost, Partition};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::util::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommunityOptions {
    pub restarts: usize,
    pub max_kmeans_iter: usize,
    pub rng_seed: u64,
    /// Largest residual `‖Ax − λx‖` accepted for the leading Ritz pairs.
    pub eig_tol: f64,
    pub eig_max_iter: usize,
}

impl Default for CommunityOptions {
    fn default() -> Self {
        CommunityOptions {
            restarts: 20,
            max_kmeans_iter: 100,
            rng_seed: 0,
            eig_tol: 1e-6,
            eig_max_iter: 5000,
        }
    }
}

/// Extra subspace columns beyond `k`; they speed up convergence when the
/// `k`-th eigenvalue is close to the next one.
const OVERSAMPLE: usize = 10;

/// Symmetric normalized operator `x ↦ x + D^-1/2 W D^-1/2 x`.
struct ShiftedOperator {
    adj: Vec<Vec<(usize, f64)>>,
}

impl ShiftedOperator {
    fn new(g: &Graph) -> Self {
        let n = g.node_count();
        let mut sym: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (s, t, w) in g.arcs() {
            sym[s].push((t, w / 2.0));
            sym[t].push((s, w / 2.0));
        }
        for row in sym.iter_mut() {
            row.sort_by_key(|&(v, _)| v);
            row.dedup_by(|next, kept| {
                if next.0 == kept.0 {
                    kept.1 += next.1;
                    true
                } else {
                    false
                }
            });
        }
        // An isolated node gets a unit self loop so that it forms its own
        // eigenvalue-1 component, like any other connected component.
        for (v, row) in sym.iter_mut().enumerate() {
            if row.is_empty() {
                row.push((v, 1.0));
            }
        }
        let inv_sqrt: Vec<f64> = sym
            .iter()
            .map(|row| 1.0 / row.iter().map(|a| a.1).sum::<f64>().sqrt())
            .collect();
        let adj = sym
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                row.into_iter()
                    .map(|(j, w)| (j, w * inv_sqrt[i] * inv_sqrt[j]))
                    .collect()
            })
            .collect();
        ShiftedOperator { adj }
    }

    fn apply(&self, q: &Block) -> Block {
        let n = q.rows;
        let mut out = Block::zeros(n, q.cols);
        out.data
            .par_chunks_mut(n)
            .zip(q.data.par_chunks(n))
            .for_each(|(dst, src)| {
                for (i, row) in self.adj.iter().enumerate() {
                    dst[i] = src[i] + row.iter().map(|&(j, w)| w * src[j]).sum::<f64>();
                }
            });
        out
    }
}

/// Leading `k` eigenvectors of the shifted operator as an `n x k` block.
fn leading_eigenvectors(op: &ShiftedOperator, k: usize, opts: &CommunityOptions) -> Result<Block> {
    let n = op.adj.len();
    let b = (k + OVERSAMPLE).min(n);
    let mut rng = stream_rng(opts.rng_seed, u64::MAX);
    let mut q = Block::random(n, b, &mut rng);
    orthonormalize(&mut q, &mut rng);
    let mut worst = f64::INFINITY;
    for _ in 0..opts.eig_max_iter {
        let y = op.apply(&q);
        let mut h = q.gram(&y);
        for i in 0..b {
            for j in 0..i {
                let avg = 0.5 * (h[j * b + i] + h[i * b + j]);
                h[j * b + i] = avg;
                h[i * b + j] = avg;
            }
        }
        let (values, vectors) = symmetric_eigen(&h, b);
        let ritz = q.times(&vectors, b);
        let image = y.times(&vectors, b);
        worst = (0..k)
            .map(|j| {
                image
                    .col(j)
                    .iter()
                    .zip(ritz.col(j))
                    .map(|(ax, x)| (ax - values[j] * x).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if worst <= opts.eig_tol {
            let mut out = Block::zeros(n, k);
            out.data.copy_from_slice(&ritz.data[..n * k]);
            return Ok(out);
        }
        q = image;
        orthonormalize(&mut q, &mut rng);
    }
    Err(Error::EigenNotConverged {
        iterations: opts.eig_max_iter,
        residual: worst,
    })
}

/// Row-major `n x k` embedding with unit-length rows (zero rows stay zero).
fn spectral_embedding(g: &Graph, k: usize, opts: &CommunityOptions) -> Result<Vec<Vec<f64>>> {
    let op = ShiftedOperator::new(g);
    let vecs = leading_eigenvectors(&op, k, opts)?;
    Ok((0..g.node_count())
        .map(|i| {
            let mut row: Vec<f64> = (0..k).map(|j| vecs.get(i, j)).collect();
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                row.iter_mut().for_each(|x| *x /= norm);
            }
            row
        })
        .collect())
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centres: &[Vec<f64>]) -> usize {
    let mut best = (0, f64::INFINITY);
    for (c, centre) in centres.iter().enumerate() {
        let d = sq_dist(point, centre);
        if d < best.1 {
            best = (c, d);
        }
    }
    best.0
}

/// Lloyd's k-means with farthest-point initialization from `first`.
/// Returns one cluster id per point; some ids may end up unused.
pub(crate) fn kmeans(points: &[Vec<f64>], k: usize, first: usize, max_iter: usize) -> Vec<usize> {
    let n = points.len();
    let mut centres = vec![points[first].clone()];
    let mut min_dist: Vec<f64> = points.iter().map(|p| sq_dist(p, &centres[0])).collect();
    while centres.len() < k {
        let (idx, d) = min_dist
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, &d)| if d > best.1 { (i, d) } else { best });
        if d <= 0.0 {
            break;
        }
        centres.push(points[idx].clone());
        for (m, p) in min_dist.iter_mut().zip(points) {
            *m = m.min(sq_dist(p, &points[idx]));
        }
    }
    let dim = points[0].len();
    let mut assign: Vec<usize> = points.iter().map(|p| nearest(p, &centres)).collect();
    for _ in 0..max_iter {
        let mut sums = vec![vec![0.0; dim]; centres.len()];
        let mut counts = vec![0usize; centres.len()];
        for (p, &c) in points.iter().zip(&assign) {
            counts[c] += 1;
            sums[c].iter_mut().zip(p).for_each(|(s, x)| *s += x);
        }
        for (c, centre) in centres.iter_mut().enumerate() {
            if counts[c] > 0 {
                *centre = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
        let next: Vec<usize> = points.iter().map(|p| nearest(p, &centres)).collect();
        if next == assign {
            break;
        }
        assign = next;
    }
    debug_assert_eq!(assign.len(), n);
    assign
}

/// Splits `g` into at most `k_target` communities by spectral clustering.
pub fn detect_communities(g: &Graph, k_target: usize, opts: &CommunityOptions) -> Result<Partition> {
    let n = g.node_count();
    if k_target < 1 || k_target > n {
        return Err(Error::invalid(format!("k_target {k_target} must lie in 1..={n}")));
    }
    if opts.restarts < 1 {
        return Err(Error::invalid("need at least one k-means restart"));
    }
    if k_target == 1 {
        return Ok(Partition::single(n));
    }
    let points = spectral_embedding(g, k_target, opts)?;
    let candidates: Vec<(Partition, f64)> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let first = stream_rng(opts.rng_seed, r as u64).random_range(0..n);
            let raw = kmeans(&points, k_target, first, opts.max_kmeans_iter);
            let p = Partition::from_assignment(&raw);
            let cost = cut_cost(g, &p).expect("partition covers graph");
            (p, cost)
        })
        .collect();
    let mut best = 0;
    for (r, (p, cost)) in candidates.iter().enumerate().skip(1) {
        let (bp, bcost) = &candidates[best];
        let more = p.community_count() > bp.community_count();
        let cheaper = p.community_count() == bp.community_count() && cost < bcost;
        if more || cheaper {
            best = r;
        }
    }
    Ok(candidates.into_iter().nth(best).expect("restarts >= 1").0)
}
