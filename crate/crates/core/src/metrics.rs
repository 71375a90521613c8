//! Partition quality: weighted modularity and normalized mutual information.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::detect::Partition;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityQuality {
    /// Total weight of edges with both endpoints inside the community.
    pub intra_weight: f64,
    /// Sum of member strengths.
    pub degree_sum: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub modularity: f64,
    pub total_weight: f64,
    pub communities: Vec<CommunityQuality>,
}

/// Maps each graph node index to its community, checking the node sets agree.
fn graph_labels(g: &WeightedGraph, p: &Partition) -> Result<Vec<usize>> {
    if g.node_count() != p.nodes().len() {
        return Err(Error::NodeMismatch(format!(
            "graph has {} nodes, partition {}",
            g.node_count(),
            p.nodes().len()
        )));
    }
    let labels = p.label_map();
    g.nodes()
        .iter()
        .map(|n| {
            labels
                .get(n.as_str())
                .copied()
                .ok_or_else(|| Error::NodeMismatch(format!("`{n}` missing from partition")))
        })
        .collect()
}

/// Per-community breakdown plus
/// `Q = sum_n [ L_n / L - (D_n / 2L)^2 ]` with `L` the total edge weight.
pub fn quality_report(g: &WeightedGraph, p: &Partition) -> Result<QualityReport> {
    let labels = graph_labels(g, p)?;
    let total = g.total_weight();
    if total <= 0.0 {
        return Err(Error::UndefinedModularity);
    }
    let mut communities = vec![
        CommunityQuality {
            intra_weight: 0.0,
            degree_sum: 0.0,
            size: 0,
        };
        p.communities()
    ];
    for (v, &c) in labels.iter().enumerate() {
        communities[c].size += 1;
        communities[c].degree_sum += g.strength_at(v);
    }
    for (i, j, w) in g.edges() {
        if labels[i] == labels[j] {
            communities[labels[i]].intra_weight += w;
        }
    }
    let modularity = communities
        .iter()
        .map(|c| c.intra_weight / total - (c.degree_sum / (2.0 * total)).powi(2))
        .sum();
    Ok(QualityReport {
        modularity,
        total_weight: total,
        communities,
    })
}

pub fn modularity(g: &WeightedGraph, p: &Partition) -> Result<f64> {
    quality_report(g, p).map(|r| r.modularity)
}

fn entropy(counts: impl Iterator<Item = usize>, n: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let q = c as f64 / n;
            -q * q.ln()
        })
        .sum()
}

/// NMI with arithmetic-mean normalization, `2 I / (H1 + H2)`.
///
/// Partitions that agree up to relabeling score exactly 1, including the
/// case where both are a single block.
pub fn nmi(p1: &Partition, p2: &Partition) -> Result<f64> {
    let other = p2.label_map();
    if p1.nodes().len() != p2.nodes().len() {
        return Err(Error::NodeMismatch(format!(
            "{} vs {} nodes",
            p1.nodes().len(),
            p2.nodes().len()
        )));
    }
    let mut joint: HashMap<(usize, usize), usize> = HashMap::new();
    for (node, &a) in p1.nodes().iter().zip(p1.assignment()) {
        let b = *other.get(node.as_str()).ok_or_else(|| {
            Error::NodeMismatch(format!("`{node}` missing from second partition"))
        })?;
        *joint.entry((a, b)).or_default() += 1;
    }
    let (m1, m2) = (p1.communities(), p2.communities());
    // a bijective contingency table means identical up to relabeling
    if joint.len() == m1 && m1 == m2 {
        return Ok(1.0);
    }
    let n = p1.nodes().len() as f64;
    let mut rows = vec![0usize; m1];
    let mut cols = vec![0usize; m2];
    for (&(a, b), &c) in &joint {
        rows[a] += c;
        cols[b] += c;
    }
    let h1 = entropy(rows.iter().copied(), n);
    let h2 = entropy(cols.iter().copied(), n);
    if h1 + h2 == 0.0 {
        return Ok(1.0);
    }
    let mut pairs: Vec<_> = joint.into_iter().collect();
    pairs.sort_unstable();
    let mi: f64 = pairs
        .into_iter()
        .map(|((a, b), c)| {
            let pab = c as f64 / n;
            pab * (pab * n * n / (rows[a] as f64 * cols[b] as f64)).ln()
        })
        .sum();
    Ok((2.0 * mi / (h1 + h2)).clamp(0.0, 1.0))
}
