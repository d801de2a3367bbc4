//! Library results checked against independent reference computations.

mod common;

use gtacb_core::centrality::{betweenness_centrality, centrality_table, closeness_centrality, pagerank};
use gtacb_core::community::{cut_cost, detect_communities, CommunityOptions};
use gtacb_core::epidemic::{transmission_probability, SirConfig, TransmissionMode};
use gtacb_core::graph::parse_edge_list;
use gtacb_core::harness::{diffusion_speed, generate_modular_graph};
use gtacb_core::madm::{topsis_rank, Criterion, DecisionMatrix};
use gtacb_core::{Graph, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn undirected(text: &str) -> Graph {
    parse_edge_list(text.as_bytes(), false, false).unwrap().0
}

#[test]
fn four_cycle_betweenness() {
    let g = undirected("a b\nb c\nc d\nd a\n");
    let bc = betweenness_centrality(&g);
    assert_eq!(bc, common::betweenness_oracle(&g));
    assert!(bc.iter().all(|&b| (b - 1.0).abs() < 1e-12));
}

#[test]
fn inward_star_pagerank() {
    let (g, _) = parse_edge_list("1 0\n2 0\n3 0\n4 0\n".as_bytes(), true, false).unwrap();
    let pr = pagerank(&g, 0.85, 1e-10, 200).unwrap();
    let oracle = common::pagerank_oracle(&g, 0.85);
    for (a, b) in pr.iter().zip(&oracle) {
        assert!((a - b).abs() <= 1e-8, "{pr:?} vs {oracle:?}");
    }
    assert!(pr[g.node_index("0").unwrap()] > 0.4);
}

#[test]
fn random_graphs_match_brute_force() {
    for seed in 0..20 {
        let g = common::random_graph(12 + seed as usize, 0.2, seed % 2 == 1, true, seed);
        let bc = betweenness_centrality(&g);
        for (a, b) in bc.iter().zip(common::betweenness_oracle(&g)) {
            assert!((a - b).abs() <= 1e-9);
        }
        assert_eq!(closeness_centrality(&g), common::closeness_oracle(&g));
        let pr = pagerank(&g, 0.85, 1e-10, 200).unwrap();
        for (a, b) in pr.iter().zip(common::pagerank_oracle(&g, 0.85)) {
            assert!((a - b).abs() <= 1e-8);
        }
    }
}

#[test]
fn closeness_times_distance_sum_is_one() {
    for seed in 0..10 {
        let g = common::random_graph(25, 0.1, true, false, 50 + seed);
        let d = common::floyd_warshall(&g);
        for (v, cc) in closeness_centrality(&g).into_iter().enumerate() {
            let total: u32 = d[v].iter().flatten().sum();
            if total > 0 {
                // (1/s)*s rounds to 1 - 2^-53 for some s (49, for one).
                assert_eq!(cc, 1.0 / total as f64);
                assert!((cc * total as f64 - 1.0).abs() <= f64::EPSILON);
            }
        }
    }
}

#[test]
fn path_center_dominates() {
    let g = undirected("a b\nb c\n");
    let t = centrality_table(&g).unwrap();
    let b = g.node_index("b").unwrap();
    for other in ["a", "c"] {
        let o = g.node_index(other).unwrap();
        for (col, _) in t.columns().iter().zip(0..) {
            assert!(col[b] > col[o]);
        }
    }
}

#[test]
fn topsis_three_by_two_step_by_step() {
    let rows = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
    let criteria = vec![Criterion::benefit("x", 0.5), Criterion::benefit("y", 0.5)];
    let labels: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
    let ranking = topsis_rank(&DecisionMatrix::new(labels, criteria, rows.clone()).unwrap()).unwrap();

    // Spreadsheet-style recomputation of every step.
    let norms: Vec<f64> = (0..2)
        .map(|j| rows.iter().map(|r| r[j] * r[j]).sum::<f64>().sqrt())
        .collect();
    let t: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| (0..2).map(|j| 0.5 * r[j] / norms[j]).collect())
        .collect();
    let best: Vec<f64> = (0..2)
        .map(|j| t.iter().map(|r| r[j]).fold(f64::MIN, f64::max))
        .collect();
    let worst: Vec<f64> = (0..2)
        .map(|j| t.iter().map(|r| r[j]).fold(f64::MAX, f64::min))
        .collect();
    for (i, row) in t.iter().enumerate() {
        let sp = row.iter().zip(&best).map(|(x, b)| (x - b).powi(2)).sum::<f64>().sqrt();
        let sm = row.iter().zip(&worst).map(|(x, w)| (x - w).powi(2)).sum::<f64>().sqrt();
        let got = ranking.entries.iter().find(|e| e.row == i).unwrap();
        assert!((got.c_star - sm / (sm + sp)).abs() <= 1e-12);
        assert!((got.s_plus - sp).abs() <= 1e-12 && (got.s_minus - sm).abs() <= 1e-12);
    }
    assert_eq!(ranking.entries[0].label, "c");
    assert!((ranking.entries[0].c_star - 1.0).abs() <= 1e-12);
}

#[test]
fn cut_cost_matches_double_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for seed in 0..10 {
        let g = common::random_graph(10, 0.4, seed % 2 == 0, true, 300 + seed);
        let raw: Vec<usize> = (0..10).map(|_| rng.random_range(0..3)).collect();
        let p = Partition::from_assignment(&raw);
        let got = cut_cost(&g, &p).unwrap();
        let want = common::cut_cost_oracle(&g, p.assignment());
        assert!((got - want).abs() <= 1e-12);
    }
}

#[test]
fn planted_modules_cost_no_more_than_planted_split() {
    for seed in 0..20 {
        let (g, module) = generate_modular_graph(20, 2, 0.3, 0.9, seed).unwrap();
        let p = detect_communities(&g, 2, &CommunityOptions::default()).unwrap();
        let planted = common::cut_cost_oracle(&g, &module);
        assert!(cut_cost(&g, &p).unwrap() <= planted + 1e-9, "seed {seed}");
    }
}

#[test]
fn small_graphs_never_beat_exhaustive_optimum() {
    for seed in 0..20 {
        let n = 6 + seed as usize % 7;
        let (g, _) = generate_modular_graph(n, 2, 0.4, 0.85, 900 + seed).unwrap();
        let p = detect_communities(&g, 2, &CommunityOptions::default()).unwrap();
        assert!(cut_cost(&g, &p).unwrap() >= common::min_two_way_cut(&g) - 1e-9);
    }
}

#[test]
fn transmission_modes_diverge_as_documented() {
    let cfg = SirConfig {
        infectious_periods: 2,
        alpha: vec![0.3, 0.15],
        kappa: 1.0,
        ..SirConfig::default()
    };
    let contacts = [(1.0, 1), (1.0, 1)];
    let per_edge = transmission_probability(&contacts, &cfg);
    let summed = transmission_probability(
        &contacts,
        &SirConfig {
            mode: TransmissionMode::SummedClamped,
            ..cfg.clone()
        },
    );
    assert!((per_edge - (1.0 - 0.7f64 * 0.7)).abs() < 1e-15);
    assert!((summed - 0.6).abs() < 1e-15);
}

#[test]
fn diffusion_speed_arithmetic() {
    let eta = diffusion_speed(2871.0, 200, 15.08).unwrap();
    assert!((eta - 177.1).abs() <= 0.1);
}
