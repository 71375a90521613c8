//! Two-step seeded community detection.
//!
//! Step one picks `k` central nodes: repeatedly the strongest node not
//! adjacent to any chosen center, falling back to the strongest unchosen
//! node. Step two grows one community per center. Every unassigned node
//! adjacent to an assigned one is scored against each neighbouring
//! community by how much its connection exceeds the degree-based
//! expectation; the highest score is assigned next. Nodes never reached
//! become singleton communities.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::metrics::QualityReport;

/// Assignment of every node to exactly one of `m` contiguous communities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    nodes: Vec<String>,
    assignment: Vec<usize>,
    communities: usize,
    k_requested: usize,
}

impl Partition {
    /// Validates that labels are contiguous `0..m` with no empty community
    /// and that node ids are unique.
    pub fn new(nodes: Vec<String>, assignment: Vec<usize>, k_requested: usize) -> Result<Self> {
        if nodes.len() != assignment.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} nodes but {} labels",
                nodes.len(),
                assignment.len()
            )));
        }
        let unique: HashSet<&str> = nodes.iter().map(String::as_str).collect();
        if unique.len() != nodes.len() {
            return Err(Error::InvalidParameter(
                "duplicate node in partition".into(),
            ));
        }
        let communities = assignment.iter().max().map_or(0, |&m| m + 1);
        let mut used = vec![false; communities];
        for &c in &assignment {
            used[c] = true;
        }
        if let Some(empty) = used.iter().position(|u| !u) {
            return Err(Error::InvalidParameter(format!(
                "community {empty} is empty"
            )));
        }
        Ok(Partition {
            nodes,
            assignment,
            communities,
            k_requested,
        })
    }

    /// Relabels arbitrary labels to `0..m` in order of first appearance.
    pub fn from_labels<L: Eq + std::hash::Hash>(nodes: Vec<String>, labels: &[L]) -> Result<Self> {
        let mut map: HashMap<&L, usize> = HashMap::new();
        let assignment = labels
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(l).or_insert(next)
            })
            .collect();
        let m = map.len();
        Partition::new(nodes, assignment, m)
    }

    /// Builds a partition from explicit member lists; community `i` is `groups[i]`.
    pub fn from_groups(groups: &[Vec<String>], k_requested: usize) -> Result<Self> {
        let mut nodes = Vec::new();
        let mut assignment = Vec::new();
        for (c, members) in groups.iter().enumerate() {
            for n in members {
                nodes.push(n.clone());
                assignment.push(c);
            }
        }
        Partition::new(nodes, assignment, k_requested)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn communities(&self) -> usize {
        self.communities
    }

    pub fn k_requested(&self) -> usize {
        self.k_requested
    }

    pub fn community_of(&self, node: &str) -> Option<usize> {
        self.nodes
            .iter()
            .position(|n| n == node)
            .map(|i| self.assignment[i])
    }

    /// Node id → community, for lookups by id.
    pub fn label_map(&self) -> HashMap<&str, usize> {
        self.nodes
            .iter()
            .map(String::as_str)
            .zip(self.assignment.iter().copied())
            .collect()
    }

    /// Sorted member ids per community.
    pub fn members(&self) -> Vec<Vec<String>> {
        let mut groups = vec![Vec::new(); self.communities];
        for (n, &c) in self.nodes.iter().zip(&self.assignment) {
            groups[c].push(n.clone());
        }
        for g in &mut groups {
            g.sort();
        }
        groups
    }
}

/// On-disk form of a partition: sorted member lists per community, with an
/// optional quality report attached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionFile {
    pub k_requested: usize,
    pub communities: usize,
    pub members: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modularity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quality: Option<QualityReport>,
}

impl PartitionFile {
    pub fn new(p: &Partition, quality: Option<QualityReport>) -> Self {
        PartitionFile {
            k_requested: p.k_requested(),
            communities: p.communities(),
            members: p.members(),
            modularity: quality.as_ref().map(|q| q.modularity),
            quality,
        }
    }

    pub fn partition(&self) -> Result<Partition> {
        if self.members.len() != self.communities {
            return Err(Error::DimensionMismatch(format!(
                "{} member lists for {} communities",
                self.members.len(),
                self.communities
            )));
        }
        Partition::from_groups(&self.members, self.k_requested)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("partition file serializes");
        s.push('\n');
        s
    }

    pub fn from_json(input: &str) -> Result<Self> {
        serde_json::from_str(input).map_err(|e| Error::Serialization(e.to_string()))
    }
}

fn by_strength_then_id(g: &WeightedGraph, strengths: &[f64], a: usize, b: usize) -> Ordering {
    strengths[b]
        .total_cmp(&strengths[a])
        .then_with(|| g.nodes()[a].cmp(&g.nodes()[b]))
}

/// Chooses `k` seed nodes; see the module docs for the rule. Only edges of
/// positive weight count as adjacency.
pub fn select_centers(g: &WeightedGraph, k: usize) -> Result<Vec<String>> {
    let n = g.node_count();
    if k < 1 || k > n {
        return Err(Error::InvalidParameter(format!(
            "k = {k} must be within 1..={n}"
        )));
    }
    let strengths: Vec<f64> = (0..n).map(|i| g.strength_at(i)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| by_strength_then_id(g, &strengths, a, b));

    let mut chosen = Vec::with_capacity(k);
    let mut is_chosen = vec![false; n];
    let mut blocked = vec![false; n];
    while chosen.len() < k {
        let pick = order
            .iter()
            .copied()
            .find(|&v| !is_chosen[v] && !blocked[v])
            .or_else(|| order.iter().copied().find(|&v| !is_chosen[v]))
            .expect("k <= node count");
        is_chosen[pick] = true;
        for &(nb, w) in g.neighbors(pick) {
            if w > 0.0 {
                blocked[nb] = true;
            }
        }
        chosen.push(pick);
    }
    Ok(chosen.into_iter().map(|i| g.nodes()[i].clone()).collect())
}

/// Grows one community per center.
///
/// A frontier entry `(v, c)` exists while `v` is unassigned and has positive
/// edge weight `w(v, c)` into community `c`. Its score is
/// `w(v, c) - s_v * S_c / 2L`: the connection minus what a degree-preserving
/// random graph would give, with `s_v` the strength of `v`, `S_c` the summed
/// strength of `c`'s members and `L` the total edge weight. The best entry
/// is assigned (ties: lower community index, then lower node index) and never
/// revisited. Each step scans the frontier, so the cost is
/// O(|V| * frontier) rather than a heap's log factor.
pub fn expand_communities<S: AsRef<str>>(g: &WeightedGraph, centers: &[S]) -> Result<Partition> {
    if centers.is_empty() {
        return Err(Error::InvalidParameter("no centers given".into()));
    }
    let n = g.node_count();
    let strengths: Vec<f64> = (0..n).map(|i| g.strength_at(i)).collect();
    let two_l = 2.0 * g.total_weight();
    let mut assignment: Vec<Option<usize>> = vec![None; n];
    let mut volume = Vec::with_capacity(centers.len());
    for (c, id) in centers.iter().enumerate() {
        let id = id.as_ref();
        let v = g
            .index_of(id)
            .ok_or_else(|| Error::UnknownNode(id.to_string()))?;
        if assignment[v].is_some() {
            return Err(Error::InvalidParameter(format!("duplicate center `{id}`")));
        }
        assignment[v] = Some(c);
        volume.push(strengths[v]);
    }

    // frontier[v][c]: edge weight from unassigned v into community c
    let mut frontier: BTreeMap<usize, BTreeMap<usize, f64>> = BTreeMap::new();
    let attach = |v: usize,
                  c: usize,
                  assignment: &[Option<usize>],
                  frontier: &mut BTreeMap<usize, BTreeMap<usize, f64>>| {
        for &(u, w) in g.neighbors(v) {
            if w > 0.0 && assignment[u].is_none() {
                *frontier.entry(u).or_default().entry(c).or_insert(0.0) += w;
            }
        }
    };
    for v in 0..n {
        if let Some(c) = assignment[v] {
            attach(v, c, &assignment, &mut frontier);
        }
    }

    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for (&v, links) in &frontier {
            for (&c, &w) in links {
                let score = w - strengths[v] * volume[c] / two_l;
                // iteration is in (v, c) order, so only a strictly better score,
                // or an equal score in a lower community, displaces the incumbent
                let better = match best {
                    None => true,
                    Some((bs, bc, _)) => score > bs || (score == bs && c < bc),
                };
                if better {
                    best = Some((score, c, v));
                }
            }
        }
        let Some((_, c, v)) = best else { break };
        frontier.remove(&v);
        assignment[v] = Some(c);
        volume[c] += strengths[v];
        attach(v, c, &assignment, &mut frontier);
    }

    let mut next = centers.len();
    let assignment = assignment
        .into_iter()
        .map(|a| {
            a.unwrap_or_else(|| {
                next += 1;
                next - 1
            })
        })
        .collect();
    Partition::new(g.nodes().to_vec(), assignment, centers.len())
}

/// Center selection followed by expansion.
pub fn detect(g: &WeightedGraph, k: usize) -> Result<Partition> {
    let centers = select_centers(g, k)?;
    expand_communities(g, &centers)
}
