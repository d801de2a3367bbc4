use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::util::stream_rng;

/// Random undirected graph with `c` planted modules.
///
/// Nodes `1..=n` are split into `c` contiguous modules whose sizes differ by
/// at most one. The expected number of edges is `p * n(n-1)/2`, a fraction
/// `r` of them inside modules. Per-pair probabilities that would exceed one
/// are capped at one. Returns the graph and the planted module of every node.
pub fn generate_modular_graph(n: usize, c: usize, p: f64, r: f64, rng_seed: u64) -> Result<(Graph, Vec<usize>)> {
    if c < 1 || n < c {
        return Err(Error::invalid(format!("need n >= c >= 1, got n={n}, c={c}")));
    }
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&r) {
        return Err(Error::invalid("p and r must lie in [0, 1]"));
    }
    let module: Vec<usize> = (0..n).map(|i| i * c / n).collect();
    let mut sizes = vec![0usize; c];
    for &m in &module {
        sizes[m] += 1;
    }
    let pairs = (n * (n - 1) / 2) as f64;
    let intra_pairs = sizes.iter().map(|&s| s * s.saturating_sub(1) / 2).sum::<usize>() as f64;
    let inter_pairs = pairs - intra_pairs;
    let expected = p * pairs;
    let (p_in, p_out) = if inter_pairs == 0.0 || intra_pairs == 0.0 {
        (p, p)
    } else {
        (
            (r * expected / intra_pairs).min(1.0),
            ((1.0 - r) * expected / inter_pairs).min(1.0),
        )
    };
    let mut rng = stream_rng(rng_seed, 0);
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let prob = if module[i] == module[j] { p_in } else { p_out };
            if rng.random::<f64>() < prob {
                arcs.push((i, j, 1.0));
                arcs.push((j, i, 1.0));
            }
        }
    }
    let labels = (1..=n).map(|i| i.to_string()).collect();
    Ok((Graph::from_clean_arcs(labels, arcs), module))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn intra_fraction(g: &Graph, module: &[usize]) -> Option<f64> {
        let total = g.arc_count();
        if total == 0 {
            return None;
        }
        let intra = g.arcs().filter(|&(s, t, _)| module[s] == module[t]).count();
        Some(intra as f64 / total as f64)
    }

    #[test]
    fn extremes_give_disjoint_cliques() {
        let (g, module) = generate_modular_graph(4, 2, 1.0, 1.0, 3).unwrap();
        assert_eq!(module, vec![0, 0, 1, 1]);
        assert_eq!(g.arc_count(), 4);
        assert!(g.arcs().all(|(s, t, _)| module[s] == module[t]));
    }

    #[test]
    fn planted_intra_fraction() {
        let fractions: Vec<f64> = (0..100)
            .filter_map(|s| {
                let (g, m) = generate_modular_graph(20, 2, 0.3, 0.9, s).unwrap();
                intra_fraction(&g, &m)
            })
            .collect();
        let mean = fractions.iter().sum::<f64>() / fractions.len() as f64;
        assert!((mean - 0.9).abs() <= 0.1, "mean intra fraction {mean}");
    }

    #[test]
    fn single_module_is_plain_random_graph() {
        let densities: Vec<f64> = (0..100)
            .map(|s| {
                let (g, _) = generate_modular_graph(50, 1, 0.2, 0.5, s).unwrap();
                g.arc_count() as f64 / (50.0 * 49.0)
            })
            .collect();
        let mean = densities.iter().sum::<f64>() / 100.0;
        assert!((mean - 0.2).abs() <= 0.05, "mean density {mean}");
    }

    #[test]
    fn invalid_inputs() {
        assert!(generate_modular_graph(2, 3, 0.5, 0.5, 0).is_err());
        assert!(generate_modular_graph(5, 0, 0.5, 0.5, 0).is_err());
        assert!(generate_modular_graph(5, 2, 1.5, 0.5, 0).is_err());
        assert!(generate_modular_graph(5, 2, 0.5, -0.1, 0).is_err());
    }

    #[test]
    fn seeded() {
        let a = generate_modular_graph(30, 3, 0.2, 0.8, 9).unwrap();
        let b = generate_modular_graph(30, 3, 0.2, 0.8, 9).unwrap();
        assert!(a.0.arcs().eq(b.0.arcs()));
        assert_eq!(a.1, b.1);
    }
}
