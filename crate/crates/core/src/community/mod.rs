//! Graph partitions, the inter-community cut cost, and spectral community
//! detection.

mod linalg;
mod spectral;

use std::collections::HashMap;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use spectral::{detect_communities, CommunityOptions};

/// Disjoint communities covering every node, indexed by decreasing size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    sizes: Vec<usize>,
}

impl Partition {
    /// Normalizes arbitrary community ids: empty communities disappear and
    /// the rest are renumbered by decreasing size, ties going to the
    /// community holding the lowest node index.
    pub fn from_assignment(raw: &[usize]) -> Partition {
        let mut first_seen: HashMap<usize, (usize, usize)> = HashMap::new();
        for (node, &c) in raw.iter().enumerate() {
            first_seen.entry(c).or_insert((node, 0)).1 += 1;
        }
        let mut ids: Vec<(usize, usize, usize)> = first_seen
            .into_iter()
            .map(|(c, (first, size))| (c, first, size))
            .collect();
        ids.sort_by(|a, b| b.2.cmp(&a.2).then(a.1.cmp(&b.1)));
        let remap: HashMap<usize, usize> = ids.iter().enumerate().map(|(new, &(old, _, _))| (old, new)).collect();
        Partition {
            assignment: raw.iter().map(|c| remap[c]).collect(),
            sizes: ids.iter().map(|&(_, _, size)| size).collect(),
        }
    }

    /// Every node in one community.
    pub fn single(n: usize) -> Partition {
        Partition {
            assignment: vec![0; n],
            sizes: vec![n],
        }
    }

    pub fn community_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn community_of(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Members of every community in ascending node order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (node, &c) in self.assignment.iter().enumerate() {
            out[c].push(node);
        }
        out
    }

    /// `node,community` rows in node index order.
    pub fn to_csv(&self, g: &Graph) -> String {
        let mut out = String::from("node,community\n");
        for (node, c) in self.assignment.iter().enumerate() {
            out.push_str(&format!("{},{}\n", g.label(node), c));
        }
        out
    }

    /// Reads a `node,community` CSV produced by any detector. Every node of
    /// `g` must appear exactly once.
    pub fn from_csv<R: BufRead>(reader: R, g: &Graph) -> Result<Partition> {
        let mut raw = vec![usize::MAX; g.node_count()];
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || (i == 0 && line.starts_with("node")) {
                continue;
            }
            let bad = || Error::Parse {
                line: i + 1,
                message: format!("expected `node,community`, got `{line}`"),
            };
            let (label, community) = line.split_once(',').ok_or_else(bad)?;
            let community: usize = community.trim().parse().map_err(|_| bad())?;
            let node = g.require_node(label.trim())?;
            if raw[node] != usize::MAX {
                return Err(Error::Partition(format!("node `{}` assigned twice", label.trim())));
            }
            raw[node] = community;
        }
        if let Some(node) = raw.iter().position(|&c| c == usize::MAX) {
            return Err(Error::Partition(format!("node `{}` has no community", g.label(node))));
        }
        Ok(Partition::from_assignment(&raw))
    }
}

/// Total weight of arcs whose endpoints lie in different communities.
pub fn cut_cost(g: &Graph, p: &Partition) -> Result<f64> {
    if p.node_count() != g.node_count() {
        return Err(Error::Partition(format!(
            "partition covers {} nodes, graph has {}",
            p.node_count(),
            g.node_count()
        )));
    }
    Ok(g.arcs()
        .filter(|&(s, t, _)| p.assignment[s] != p.assignment[t])
        .map(|(_, _, w)| w)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    fn undirected(text: &str) -> Graph {
        parse_edge_list(text.as_bytes(), false, true).unwrap().0
    }

    #[test]
    fn reindexes_by_decreasing_size() {
        let p = Partition::from_assignment(&[7, 3, 3, 9, 3, 7]);
        assert_eq!(p.sizes(), &[3, 2, 1]);
        assert_eq!(p.assignment(), &[1, 0, 0, 2, 0, 1]);
        assert_eq!(p.members(), vec![vec![1, 2, 4], vec![0, 5], vec![3]]);
    }

    #[test]
    fn cut_cost_of_separated_triangles_is_zero() {
        let g = undirected("a b\nb c\nc a\nx y\ny z\nz x\n");
        let p = Partition::from_assignment(&[0, 0, 0, 1, 1, 1]);
        assert_eq!(cut_cost(&g, &p).unwrap(), 0.0);
    }

    #[test]
    fn split_edge_costs_both_arcs() {
        let g = undirected("a b\n");
        let p = Partition::from_assignment(&[0, 1]);
        assert_eq!(cut_cost(&g, &p).unwrap(), 2.0);
    }

    #[test]
    fn cut_cost_rejects_wrong_size() {
        let g = undirected("a b\n");
        assert!(cut_cost(&g, &Partition::single(3)).is_err());
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let g = undirected("a b\nb c\n");
        let p = Partition::from_assignment(&[0, 0, 1]);
        let csv = p.to_csv(&g);
        assert_eq!(csv, "node,community\na,0\nb,0\nc,1\n");
        assert_eq!(Partition::from_csv(csv.as_bytes(), &g).unwrap(), p);
        assert!(Partition::from_csv("node,community\na,0\nb,1\n".as_bytes(), &g).is_err());
        assert!(Partition::from_csv("a,0\na,1\nb,0\nc,0\n".as_bytes(), &g).is_err());
        assert!(Partition::from_csv("a,0\nb,0\nq,1\n".as_bytes(), &g).is_err());
        assert!(Partition::from_csv("a;0\n".as_bytes(), &g).is_err());
    }
}
