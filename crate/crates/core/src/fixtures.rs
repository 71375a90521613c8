//! Bundled datasets and a planted-partition generator.
//!
//! Generated fixtures draw every random number from ChaCha8 (`rand_chacha`
//! 0.3) seeded with `seed_from_u64`. Values are derived from raw `u64`
//! output with the conversions below rather than through `rand`
//! distributions, so the bytes produced for a seed depend only on the
//! ChaCha8 stream.

use std::fs;
use std::path::Path;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{write_documents, Document, EdgeList};
use crate::detect::{Partition, PartitionFile};
use crate::error::{Error, Result};
use crate::sentiment::SentimentLexicon;

/// Lexicon terms used for sentiment tokens in synthetic texts.
pub const POSITIVE_TERM: &str = "good";
pub const NEGATIVE_TERM: &str = "bad";

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub groups: usize,
    pub nodes_per_group: usize,
    /// Edge probability between two users of the same group.
    pub p_in: f64,
    /// Edge probability between users of different groups.
    pub p_out: f64,
    /// Number of topic terms private to each group.
    pub vocab_per_group: usize,
    /// Topic tokens per user text.
    pub topic_tokens: usize,
    /// Sentiment tokens per user text.
    pub sentiment_tokens: usize,
    /// Target polarity per group in [-1, 1]; each sentiment token is positive
    /// with probability `(1 + p) / 2`.
    pub sentiment_per_group: Vec<f64>,
    pub seed: u64,
}

impl SyntheticSpec {
    /// Planted partition with `groups` groups and alternating polarities.
    pub fn planted(
        groups: usize,
        nodes_per_group: usize,
        p_in: f64,
        p_out: f64,
        seed: u64,
    ) -> Self {
        let sentiment_per_group = (0..groups)
            .map(|g| {
                let magnitude = 0.9 - 0.4 * (g / 2) as f64 / groups.max(2) as f64;
                if g % 2 == 0 {
                    magnitude
                } else {
                    -magnitude
                }
            })
            .collect();
        SyntheticSpec {
            groups,
            nodes_per_group,
            p_in,
            p_out,
            vocab_per_group: 12,
            topic_tokens: 20,
            sentiment_tokens: 4,
            sentiment_per_group,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.groups == 0 || self.nodes_per_group == 0 {
            return bad("synthetic spec needs at least one group with one node".into());
        }
        if self.vocab_per_group == 0 {
            return bad("vocab_per_group must be positive".into());
        }
        for (name, p) in [("p_in", self.p_in), ("p_out", self.p_out)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} = {p} outside [0, 1]"));
            }
        }
        if self.sentiment_per_group.len() != self.groups {
            return bad(format!(
                "{} sentiment polarities for {} groups",
                self.sentiment_per_group.len(),
                self.groups
            ));
        }
        if let Some(p) = self
            .sentiment_per_group
            .iter()
            .find(|p| !(-1.0..=1.0).contains(*p))
        {
            return bad(format!("polarity {p} outside [-1, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    pub documents: Vec<Document>,
    pub edges: EdgeList,
    pub lexicon: SentimentLexicon,
    pub truth: Partition,
}

impl SyntheticDataset {
    /// Writes `corpus.jsonl`, `edges.csv`, `lexicon.tsv` and `truth.json`.
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let files = [
            ("corpus.jsonl", write_documents(&self.documents)),
            ("edges.csv", self.edges.to_csv()),
            ("lexicon.tsv", self.lexicon.to_tsv()),
            (
                "truth.json",
                PartitionFile::new(&self.truth, None).to_json(),
            ),
        ];
        for (name, contents) in files {
            let path = dir.join(name);
            fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}

/// Uniform in [0, 1) from the top 53 bits.
fn next_unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn next_index(rng: &mut ChaCha8Rng, len: usize) -> usize {
    ((next_unit(rng) * len as f64) as usize).min(len - 1)
}

pub fn topic_term(group: usize, idx: usize) -> String {
    format!("g{group}t{idx}")
}

/// Deterministic planted-partition corpus, edge list, lexicon and ground truth.
///
/// Users are numbered group by group, so ids sort in group order. Texts are
/// built user by user, then edges are sampled pair by pair in id order.
pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticDataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.groups * spec.nodes_per_group;
    let width = n.saturating_sub(1).to_string().len();
    let ids: Vec<String> = (0..n).map(|i| format!("u{i:0width$}")).collect();
    let group_of = |i: usize| i / spec.nodes_per_group;

    let mut documents = Vec::with_capacity(n);
    for (i, id) in ids.iter().enumerate() {
        let g = group_of(i);
        let p_positive = (1.0 + spec.sentiment_per_group[g]) / 2.0;
        let mut words = Vec::with_capacity(spec.topic_tokens + spec.sentiment_tokens);
        for _ in 0..spec.topic_tokens {
            words.push(topic_term(g, next_index(&mut rng, spec.vocab_per_group)));
        }
        for _ in 0..spec.sentiment_tokens {
            let term = if next_unit(&mut rng) < p_positive {
                POSITIVE_TERM
            } else {
                NEGATIVE_TERM
            };
            words.push(term.to_string());
        }
        documents.push(Document::new(id.clone(), words.join(" ")));
    }

    let mut edges = EdgeList::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = if group_of(i) == group_of(j) {
                spec.p_in
            } else {
                spec.p_out
            };
            if next_unit(&mut rng) < p {
                edges.insert(ids[i].clone(), ids[j].clone());
            }
        }
    }

    let lexicon = SentimentLexicon::new([(POSITIVE_TERM, 1.0), (NEGATIVE_TERM, -1.0)])?;
    let truth = Partition::new(ids, (0..n).map(group_of).collect(), spec.groups)?;
    Ok(SyntheticDataset {
        documents,
        edges,
        lexicon,
        truth,
    })
}

/// Zachary's karate club: 34 members (ids `01`..`34`), 78 undirected ties.
const KARATE_EDGES: [(u8, u8); 78] = [
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (1, 6),
    (1, 7),
    (1, 8),
    (1, 9),
    (1, 11),
    (1, 12),
    (1, 13),
    (1, 14),
    (1, 18),
    (1, 20),
    (1, 22),
    (1, 32),
    (2, 3),
    (2, 4),
    (2, 8),
    (2, 14),
    (2, 18),
    (2, 20),
    (2, 22),
    (2, 31),
    (3, 4),
    (3, 8),
    (3, 9),
    (3, 10),
    (3, 14),
    (3, 28),
    (3, 29),
    (3, 33),
    (4, 8),
    (4, 13),
    (4, 14),
    (5, 7),
    (5, 11),
    (6, 7),
    (6, 11),
    (6, 17),
    (7, 17),
    (9, 31),
    (9, 33),
    (9, 34),
    (10, 34),
    (14, 34),
    (15, 33),
    (15, 34),
    (16, 33),
    (16, 34),
    (19, 33),
    (19, 34),
    (20, 34),
    (21, 33),
    (21, 34),
    (23, 33),
    (23, 34),
    (24, 26),
    (24, 28),
    (24, 30),
    (24, 33),
    (24, 34),
    (25, 26),
    (25, 28),
    (25, 32),
    (26, 32),
    (27, 30),
    (27, 34),
    (28, 34),
    (29, 32),
    (29, 34),
    (30, 33),
    (30, 34),
    (31, 33),
    (31, 34),
    (32, 33),
    (32, 34),
    (33, 34),
];

/// Members who sided with the instructor after the split.
const KARATE_INSTRUCTOR_FACTION: [u8; 17] =
    [1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 17, 18, 20, 22];

fn karate_id(member: u8) -> String {
    format!("{member:02}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct KarateClub {
    pub edges: EdgeList,
    pub nodes: Vec<String>,
    /// Instructor faction is community 0, officer faction community 1.
    pub factions: Partition,
}

impl KarateClub {
    /// Writes `edges.csv` and `truth.json`.
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (name, contents) in [
            ("edges.csv", self.edges.to_csv()),
            (
                "truth.json",
                PartitionFile::new(&self.factions, None).to_json(),
            ),
        ] {
            let path = dir.join(name);
            fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}

pub fn karate() -> KarateClub {
    let edges: EdgeList = KARATE_EDGES
        .iter()
        .map(|&(a, b)| (karate_id(a), karate_id(b)))
        .collect();
    let nodes: Vec<String> = (1..=34).map(karate_id).collect();
    let assignment = (1..=34)
        .map(|m| usize::from(!KARATE_INSTRUCTOR_FACTION.contains(&m)))
        .collect();
    let factions = Partition::new(nodes.clone(), assignment, 2).expect("static labels are valid");
    KarateClub {
        edges,
        nodes,
        factions,
    }
}
