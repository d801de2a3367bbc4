//! TOPSIS ranking.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::util::{compensated_sum, label_cmp};

/// Whether larger or smaller values of a criterion are preferred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Benefit,
    Cost,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Criterion {
    pub name: String,
    pub direction: Direction,
    pub weight: f64,
}

impl Criterion {
    pub fn benefit(name: impl Into<String>, weight: f64) -> Self {
        Criterion {
            name: name.into(),
            direction: Direction::Benefit,
            weight,
        }
    }
}

/// `m` alternatives scored on `p` criteria.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionMatrix {
    alternatives: Vec<String>,
    criteria: Vec<Criterion>,
    /// Row-major, `m * p`.
    values: Vec<f64>,
}

const WEIGHT_SUM_TOL: f64 = 1e-12;

impl DecisionMatrix {
    pub fn new(alternatives: Vec<String>, criteria: Vec<Criterion>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let (m, p) = (alternatives.len(), criteria.len());
        if m == 0 || p == 0 {
            return Err(Error::invalid(
                "decision matrix needs at least one row and one criterion",
            ));
        }
        if rows.len() != m || rows.iter().any(|r| r.len() != p) {
            return Err(Error::invalid(format!("decision matrix must be {m} x {p}")));
        }
        if criteria.iter().any(|c| !(c.weight >= 0.0 && c.weight.is_finite())) {
            return Err(Error::invalid("criterion weights must be finite and non-negative"));
        }
        let total = compensated_sum(criteria.iter().map(|c| c.weight));
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::invalid(format!("criterion weights sum to {total}, expected 1")));
        }
        let values: Vec<f64> = rows.into_iter().flatten().collect();
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / p,
                criterion: criteria[pos % p].name.clone(),
            });
        }
        Ok(DecisionMatrix {
            alternatives,
            criteria,
            values,
        })
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn criteria(&self) -> &[Criterion] {
        &self.criteria
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.criteria.len() + col]
    }

    fn column(&self, col: usize) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().skip(col).step_by(self.criteria.len()).copied()
    }
}

/// One ranked alternative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedAlternative {
    /// Row index in the decision matrix.
    #[serde(skip)]
    pub row: usize,
    #[serde(rename = "node")]
    pub label: String,
    pub c_star: f64,
    pub s_plus: f64,
    pub s_minus: f64,
}

/// Alternatives sorted by relative closeness, best first.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct TopsisRanking {
    pub entries: Vec<RankedAlternative>,
}

impl TopsisRanking {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ranking serializes")
    }

    /// Row indices in rank order.
    pub fn rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.row)
    }
}

/// Closeness scores closer than this are treated as ties and ordered by label.
const TIE_RESOLUTION: f64 = 1e12;

fn tie_key(c: f64) -> i64 {
    (c * TIE_RESOLUTION).round() as i64
}

/// Positive and negative ideal points of the weighted normalized matrix.
pub fn ideal_points(t: &[Vec<f64>], criteria: &[Criterion]) -> (Vec<f64>, Vec<f64>) {
    let p = criteria.len();
    let mut best = vec![0.0; p];
    let mut worst = vec![0.0; p];
    for (j, c) in criteria.iter().enumerate() {
        let col = t.iter().map(|row| row[j]);
        let max = col.clone().fold(f64::NEG_INFINITY, f64::max);
        let min = col.fold(f64::INFINITY, f64::min);
        (best[j], worst[j]) = match c.direction {
            Direction::Benefit => (max, min),
            Direction::Cost => (min, max),
        };
    }
    (best, worst)
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    compensated_sum(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y))).sqrt()
}

/// Ranks alternatives by `C* = S- / (S- + S+)`.
///
/// Columns are divided by their Euclidean norm and scaled by their weight;
/// `S+` and `S-` are distances to the best and worst value per criterion.
/// A single alternative scores 1; a row whose two distances are both zero
/// scores 0.5. Ties (within 1e-12) are ordered by ascending label.
pub fn topsis_rank(dm: &DecisionMatrix) -> Result<TopsisRanking> {
    let m = dm.alternatives.len();
    let p = dm.criteria.len();
    let mut norms = Vec::with_capacity(p);
    for (j, c) in dm.criteria.iter().enumerate() {
        let norm = compensated_sum(dm.column(j).map(|x| x * x)).sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroCriterion(c.name.clone()));
        }
        norms.push(norm);
    }
    let weighted: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..p)
                .map(|j| dm.criteria[j].weight * (dm.value(i, j) / norms[j]))
                .collect()
        })
        .collect();
    let (best, worst) = ideal_points(&weighted, &dm.criteria);
    let mut entries: Vec<RankedAlternative> = weighted
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let s_plus = distance(row, &best);
            let s_minus = distance(row, &worst);
            let c_star = if m == 1 {
                1.0
            } else if s_plus + s_minus == 0.0 {
                0.5
            } else {
                s_minus / (s_minus + s_plus)
            };
            RankedAlternative {
                row: i,
                label: dm.alternatives[i].clone(),
                c_star,
                s_plus,
                s_minus,
            }
        })
        .collect();
    entries.sort_by(|a, b| {
        tie_key(b.c_star)
            .cmp(&tie_key(a.c_star))
            .then_with(|| label_cmp(&a.label, &b.label))
            .then(a.row.cmp(&b.row))
    });
    Ok(TopsisRanking { entries })
}

/// `p` weights of `1/p` each.
pub fn equal_weights(p: usize) -> Result<Vec<f64>> {
    if p == 0 {
        return Err(Error::invalid("need at least one criterion"));
    }
    Ok(vec![1.0 / p as f64; p])
}

/// Ordering helper for callers that rank by one score with label tie-break.
pub(crate) fn by_score_desc(a: (f64, &str), b: (f64, &str)) -> Ordering {
    b.0.partial_cmp(&a.0)
        .unwrap_or(Ordering::Equal)
        .then_with(|| label_cmp(a.1, b.1))
}
