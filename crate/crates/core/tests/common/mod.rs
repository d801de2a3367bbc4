//! Independent reference implementations used as test oracles.
//!
//! None of these share code paths with the library algorithms they check.

#![allow(dead_code)]

use gtacb_core::graph::{parse_edge_list, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random graph on `n` nodes with arc probability `p`, as edge-list text.
pub fn random_graph(n: usize, p: f64, directed: bool, weighted: bool, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::new();
    for i in 0..n {
        // Every node appears even if it ends up isolated.
        text.push_str(&format!("{i} {i}\n"));
    }
    for i in 0..n {
        for j in 0..n {
            if i == j || (!directed && j < i) {
                continue;
            }
            if rng.random::<f64>() < p {
                let w = if weighted { rng.random_range(0.1..5.0) } else { 1.0 };
                text.push_str(&format!("{i} {j} {w}\n"));
            }
        }
    }
    parse_edge_list(text.as_bytes(), directed, true).unwrap().0
}

/// All-pairs hop distances by Floyd-Warshall (`None` = unreachable).
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<u32>>> {
    let n = g.node_count();
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    for (s, t, _) in g.arcs() {
        d[s][t] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Closeness from the all-pairs distance matrix.
pub fn closeness_oracle(g: &Graph) -> Vec<f64> {
    floyd_warshall(g)
        .iter()
        .map(|row| {
            let total: u32 = row.iter().flatten().sum();
            if total == 0 {
                0.0
            } else {
                1.0 / total as f64
            }
        })
        .collect()
}

/// Betweenness by explicitly listing every geodesic between every ordered pair.
pub fn betweenness_oracle(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let d = floyd_warshall(g);
    let mut bc = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            let Some(dst) = d[s][t] else { continue };
            if s == t {
                continue;
            }
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut stack = vec![vec![s]];
            while let Some(path) = stack.pop() {
                let last = *path.last().unwrap();
                if last == t {
                    paths.push(path);
                    continue;
                }
                let depth = path.len() as u32 - 1;
                for &(next, _) in g.out_arcs(last) {
                    if d[next][t].is_some_and(|r| depth + 1 + r == dst) {
                        let mut p = path.clone();
                        p.push(next);
                        stack.push(p);
                    }
                }
            }
            let share = 1.0 / paths.len() as f64;
            for p in &paths {
                for &v in &p[1..p.len() - 1] {
                    bc[v] += share;
                }
            }
        }
    }
    bc
}

/// PageRank as the solution of `(I - d M) x = (1 - d)/n`, where column `j`
/// of `M` spreads node `j`'s rank by arc weight (uniformly if dangling).
pub fn pagerank_oracle(g: &Graph, damping: f64) -> Vec<f64> {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for j in 0..n {
        let out = g.out_arcs(j);
        if out.is_empty() {
            for row in a.iter_mut() {
                row[j] -= damping / n as f64;
            }
        } else {
            let strength: f64 = out.iter().map(|a| a.1).sum();
            for &(i, w) in out {
                a[i][j] -= damping * w / strength;
            }
        }
    }
    let b = vec![(1.0 - damping) / n as f64; n];
    solve(a, b)
}

/// Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Cut cost by a double loop over all node pairs.
pub fn cut_cost_oracle(g: &Graph, assignment: &[usize]) -> f64 {
    let n = g.node_count();
    let mut cost = 0.0;
    for i in 0..n {
        for j in 0..n {
            if assignment[i] != assignment[j] {
                if let Some(&(_, w)) = g.out_arcs(i).iter().find(|a| a.0 == j) {
                    cost += w;
                }
            }
        }
    }
    cost
}

/// Minimum cut cost over all splits into two non-empty parts.
pub fn min_two_way_cut(g: &Graph) -> f64 {
    let n = g.node_count();
    assert!((2..=20).contains(&n));
    let mut best = f64::INFINITY;
    // Node 0 stays in part 0; masks cover every other assignment.
    for mask in 1u32..(1 << (n - 1)) {
        let assignment: Vec<usize> = (0..n)
            .map(|v| if v == 0 { 0 } else { ((mask >> (v - 1)) & 1) as usize })
            .collect();
        best = best.min(cut_cost_oracle(g, &assignment));
    }
    best
}

/// Number of weakly connected components.
pub fn component_count(g: &Graph) -> usize {
    let n = g.node_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for (s, t, _) in g.arcs() {
        let (a, b) = (find(&mut parent, s), find(&mut parent, t));
        parent[a] = b;
    }
    (0..n).filter(|&v| find(&mut parent, v) == v).count()
}
