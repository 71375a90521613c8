//! Undirected weighted user graph.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use crate::corpus::EdgeList;
use crate::error::{Error, Result};
use crate::similarity::SymmetricMatrix;

/// Default share of content similarity in a fused edge weight.
pub const DEFAULT_ALPHA: f64 = 0.5;

/// Nodes are kept sorted by id, so node index order equals id order.
/// Each adjacency list is sorted by neighbour index.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<Vec<(usize, f64)>>,
    total_weight: f64,
    edge_count: usize,
}

impl WeightedGraph {
    /// Builds a graph from canonical weighted edges. Node ids are sorted and
    /// deduplicated; every edge endpoint must be among them.
    pub fn from_edges<'a, I>(nodes: impl IntoIterator<Item = String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, f64)>,
    {
        let nodes: Vec<String> = nodes
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: HashMap<String, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let mut adjacency = vec![Vec::new(); nodes.len()];
        let mut seen = BTreeSet::new();
        for (a, b, w) in edges {
            let ia = *index
                .get(a)
                .ok_or_else(|| Error::UnknownNode(a.to_string()))?;
            let ib = *index
                .get(b)
                .ok_or_else(|| Error::UnknownNode(b.to_string()))?;
            if ia == ib {
                return Err(Error::InvalidParameter(format!("self-loop on `{a}`")));
            }
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "edge ({a}, {b}) has invalid weight {w}"
                )));
            }
            if !seen.insert((ia.min(ib), ia.max(ib))) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate edge ({a}, {b})"
                )));
            }
            adjacency[ia].push((ib, w));
            adjacency[ib].push((ia, w));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(n, _)| n);
        }
        // summing in canonical order keeps total_weight independent of input order
        let total_weight = seen
            .iter()
            .map(|&(i, j)| {
                adjacency[i][adjacency[i].binary_search_by_key(&j, |&(n, _)| n).unwrap()].1
            })
            .sum();
        Ok(WeightedGraph {
            nodes,
            index,
            adjacency,
            total_weight,
            edge_count: seen.len(),
        })
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sum of all edge weights, each undirected edge counted once.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn index_of(&self, node: &str) -> Option<usize> {
        self.index.get(node).copied()
    }

    pub fn neighbors(&self, idx: usize) -> &[(usize, f64)] {
        &self.adjacency[idx]
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<f64> {
        let list = &self.adjacency[i];
        list.binary_search_by_key(&j, |&(n, _)| n)
            .ok()
            .map(|p| list[p].1)
    }

    /// Weighted degree by node index.
    pub fn strength_at(&self, idx: usize) -> f64 {
        self.adjacency[idx].iter().map(|&(_, w)| w).sum()
    }

    /// Canonical edges `(i, j, w)` with `i < j`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, list)| {
            list.iter()
                .filter(move |&&(j, _)| j > i)
                .map(move |&(j, w)| (i, j, w))
        })
    }

    /// Copy with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> WeightedGraph {
        let edges: Vec<(usize, usize, f64)> = self.edges().collect();
        WeightedGraph::from_edges(
            self.nodes.clone(),
            edges
                .iter()
                .map(|&(i, j, w)| (self.nodes[i].as_str(), self.nodes[j].as_str(), w * factor)),
        )
        .expect("rescaling preserves validity")
    }

    /// CSV `u,v,weight` in canonical order. Weights use the shortest
    /// representation that parses back to the same `f64`. Isolated nodes
    /// follow as `u,,` rows so the node set survives a reload.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,v,weight\n");
        for (i, j, w) in self.edges() {
            out.push_str(&format!("{},{},{}\n", self.nodes[i], self.nodes[j], w));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if self.adjacency[i].is_empty() {
                out.push_str(&format!("{node},,\n"));
            }
        }
        out
    }

    pub fn from_csv(input: &str) -> Result<Self> {
        let mut nodes = BTreeSet::new();
        let mut edges = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (i == 0 && line == "u,v,weight") {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            match fields.as_slice() {
                [u, "", ""] if !u.is_empty() => {
                    nodes.insert(u.to_string());
                }
                [u, v, w] if !u.is_empty() && !v.is_empty() => {
                    let w: f64 = w
                        .parse()
                        .map_err(|e| Error::parse(i + 1, format!("bad weight: {e}")))?;
                    nodes.insert(u.to_string());
                    nodes.insert(v.to_string());
                    edges.push((u.to_string(), v.to_string(), w));
                }
                _ => return Err(Error::parse(i + 1, "expected `u,v,weight`")),
            }
        }
        WeightedGraph::from_edges(
            nodes,
            edges.iter().map(|(u, v, w)| (u.as_str(), v.as_str(), *w)),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let input = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv(&input)
    }
}

/// Fuses content similarity `s` and sentiment bias `sv` on each structural
/// edge: `w = alpha * s + (1 - alpha) * sv`. Node order is taken from the
/// matrices, which must agree.
pub fn build_weighted_graph(
    edges: &EdgeList,
    s: &SymmetricMatrix,
    sv: &SymmetricMatrix,
    alpha: f64,
) -> Result<WeightedGraph> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} outside [0, 1]"
        )));
    }
    if s.labels() != sv.labels() {
        return Err(Error::DimensionMismatch(format!(
            "similarity matrix has {} nodes, bias matrix {} (or orders differ)",
            s.len(),
            sv.len()
        )));
    }
    let index: HashMap<&str, usize> = s
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let mut weighted = Vec::with_capacity(edges.len());
    for (a, b) in edges.iter() {
        let ia = *index
            .get(a)
            .ok_or_else(|| Error::UnknownNode(a.to_string()))?;
        let ib = *index
            .get(b)
            .ok_or_else(|| Error::UnknownNode(b.to_string()))?;
        let w = alpha * s.get(ia, ib) + (1.0 - alpha) * sv.get(ia, ib);
        weighted.push((a, b, w));
    }
    WeightedGraph::from_edges(s.labels().iter().cloned(), weighted)
}

/// Every edge gets weight 1.
pub fn structural_graph(edges: &EdgeList, nodes: &[String]) -> Result<WeightedGraph> {
    WeightedGraph::from_edges(
        nodes.iter().cloned(),
        edges.iter().map(|(a, b)| (a, b, 1.0)),
    )
}

pub fn strength(g: &WeightedGraph, node: &str) -> Result<f64> {
    g.index_of(node)
        .map(|i| g.strength_at(i))
        .ok_or_else(|| Error::UnknownNode(node.to_string()))
}
