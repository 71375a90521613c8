//! Test-only oracles and random instance generators, independent of the
//! library's own computation paths.

#![allow(dead_code)]

use attrcomm::{Partition, WeightedGraph};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

pub fn below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

/// Random instance kept as a raw edge list so oracles never consult the graph type.
pub struct RandomGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl RandomGraph {
    pub fn node_id(i: usize) -> String {
        format!("v{i:02}")
    }

    pub fn nodes(&self) -> Vec<String> {
        (0..self.n).map(Self::node_id).collect()
    }

    pub fn graph(&self) -> WeightedGraph {
        let ids = self.nodes();
        WeightedGraph::from_edges(
            ids.clone(),
            self.edges
                .iter()
                .map(|&(i, j, w)| (ids[i].as_str(), ids[j].as_str(), w)),
        )
        .unwrap()
    }

    pub fn dense(&self) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.n]; self.n];
        for &(i, j, w) in &self.edges {
            a[i][j] = w;
            a[j][i] = w;
        }
        a
    }
}

/// Random graph with `2..=max_n` nodes, edge probability in (0.2, 0.8) and
/// weights in (0, 1]; at least one edge is guaranteed.
pub fn random_graph(rng: &mut ChaCha8Rng, max_n: usize, unit_weights: bool) -> RandomGraph {
    let n = 2 + below(rng, max_n - 1);
    let p = 0.2 + 0.6 * unit(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if unit(rng) < p {
                let w = if unit_weights { 1.0 } else { 1.0 - unit(rng) };
                edges.push((i, j, w));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1, 1.0));
    }
    RandomGraph { n, edges }
}

pub fn random_labels(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let blocks = 1 + below(rng, n);
    (0..n).map(|_| below(rng, blocks)).collect()
}

pub fn partition(nodes: Vec<String>, labels: &[usize]) -> Partition {
    Partition::from_labels(nodes, labels).unwrap()
}

/// Pair-sum modularity over all ordered node pairs:
/// `Q = 1/(2L) * sum_ij [A_ij - s_i s_j / (2L)] * [c_i == c_j]`.
pub fn pair_sum_modularity(adjacency: &[Vec<f64>], labels: &[usize]) -> f64 {
    let n = adjacency.len();
    let strength: Vec<f64> = adjacency.iter().map(|row| row.iter().sum()).collect();
    let two_l: f64 = strength.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += adjacency[i][j] - strength[i] * strength[j] / two_l;
            }
        }
    }
    q / two_l
}

/// Cosine over dense arrays with a naive dot product; zero norm gives 0.
pub fn dense_cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}
