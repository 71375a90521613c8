//! Content similarity between users: tf-idf vectors compared by cosine.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::corpus::{Corpus, Vocabulary};
use crate::error::{Error, Result};

/// Relative frequency of each term in `tokens`. Empty input yields an empty
/// map, which downstream code treats as the zero vector.
pub fn term_frequency(tokens: &[String]) -> BTreeMap<&str, f64> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for t in tokens {
        *counts.entry(t.as_str()).or_default() += 1;
    }
    let total = tokens.len() as f64;
    counts
        .into_iter()
        .map(|(t, c)| (t, c as f64 / total))
        .collect()
}

/// Natural-log inverse document frequencies aligned with a corpus vocabulary.
#[derive(Debug, Clone)]
pub struct IdfTable<'a> {
    vocabulary: &'a Vocabulary,
    values: Vec<f64>,
}

impl<'a> IdfTable<'a> {
    pub fn vocabulary(&self) -> &'a Vocabulary {
        self.vocabulary
    }

    pub fn get(&self, term: &str) -> Option<f64> {
        self.vocabulary.index_of(term).map(|i| self.values[i])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `idf(t) = ln(|D| / df(t))`, unsmoothed. Terms occurring in every user
/// document get exactly 0.
pub fn inverse_document_frequency(corpus: &Corpus) -> IdfTable<'_> {
    let vocabulary = corpus.vocabulary();
    let n_docs = corpus.len();
    let values = (0..vocabulary.len())
        .map(|i| {
            let df = vocabulary.doc_freq(i);
            if df == n_docs {
                0.0
            } else {
                (n_docs as f64 / df as f64).ln()
            }
        })
        .collect();
    IdfTable { vocabulary, values }
}

/// Sparse tf-idf vector. Entries are sorted by term index and strictly positive.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseTermVector {
    entries: Vec<(usize, f64)>,
}

impl SparseTermVector {
    /// Builds a vector from arbitrary `(index, weight)` pairs; non-positive
    /// weights are dropped and duplicate indices summed.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut map: BTreeMap<usize, f64> = BTreeMap::new();
        for (i, w) in entries {
            *map.entry(i).or_default() += w;
        }
        SparseTermVector {
            entries: map.into_iter().filter(|&(_, w)| w > 0.0).collect(),
        }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn get(&self, idx: usize) -> f64 {
        self.entries
            .binary_search_by_key(&idx, |&(i, _)| i)
            .map(|p| self.entries[p].1)
            .unwrap_or(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|&(_, w)| w * w).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &SparseTermVector) -> f64 {
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        let mut sum = 0.0;
        while let (Some(&&(i, x)), Some(&&(j, y))) = (a.peek(), b.peek()) {
            match i.cmp(&j) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => {
                    sum += x * y;
                    a.next();
                    b.next();
                }
            }
        }
        sum
    }

    pub fn scaled(&self, factor: f64) -> SparseTermVector {
        SparseTermVector::from_entries(self.entries.iter().map(|&(i, w)| (i, w * factor)))
    }
}

/// tf-idf vector of one token sequence. Tokens outside the idf vocabulary are
/// ignored; zero products are omitted.
pub fn tfidf_vector(tokens: &[String], idf: &IdfTable<'_>) -> SparseTermVector {
    let vocab = idf.vocabulary();
    SparseTermVector::from_entries(
        term_frequency(tokens)
            .into_iter()
            .filter_map(|(t, tf)| vocab.index_of(t).map(|i| (i, tf * idf.values[i]))),
    )
}

/// Cosine of the angle between two non-negative vectors, in [0, 1].
/// A zero-norm operand gives 0.
pub fn cosine_similarity(v1: &SparseTermVector, v2: &SparseTermVector) -> f64 {
    let denom = v1.norm() * v2.norm();
    if denom == 0.0 {
        return 0.0;
    }
    (v1.dot(v2) / denom).clamp(0.0, 1.0)
}

/// Pairwise values over labelled nodes. Only the strict upper triangle is
/// stored; the diagonal reads as 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    labels: Vec<String>,
    upper: Vec<f64>,
}

impl SymmetricMatrix {
    /// Evaluates `f(i, j)` once for every `i < j`.
    pub fn from_fn(labels: Vec<String>, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let n = labels.len();
        let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                upper.push(f(i, j));
            }
        }
        SymmetricMatrix { labels, upper }
    }

    pub fn zeros(labels: Vec<String>) -> Self {
        Self::from_fn(labels, |_, _| 0.0)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        // row i starts after rows 0..i, each holding n-1-r entries
        let n = self.labels.len();
        i * (2 * n - i - 1) / 2 + (j - i - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(
            i < self.len() && j < self.len(),
            "matrix index out of range"
        );
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Less => self.upper[self.offset(i, j)],
            std::cmp::Ordering::Greater => self.upper[self.offset(j, i)],
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Re-expresses the matrix over `labels`. Pairs involving a label this
    /// matrix does not know are 0.
    pub fn reindex(&self, labels: &[String]) -> SymmetricMatrix {
        let lookup: HashMap<&str, usize> = self
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let mapped: Vec<Option<usize>> = labels
            .iter()
            .map(|l| lookup.get(l.as_str()).copied())
            .collect();
        SymmetricMatrix::from_fn(labels.to_vec(), |i, j| match (mapped[i], mapped[j]) {
            (Some(a), Some(b)) => self.get(a, b),
            _ => 0.0,
        })
    }

    /// CSV with a header of labels and one row per label, values printed
    /// with `precision` decimals.
    pub fn to_csv(&self, precision: usize) -> String {
        let mut out = String::from("user");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for i in 0..self.len() {
            out.push_str(&self.labels[i]);
            for j in 0..self.len() {
                let _ = write!(out, ",{:.*}", precision, self.get(i, j));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the format written by [`SymmetricMatrix::to_csv`]. The upper
    /// triangle is authoritative.
    pub fn from_csv(input: &str) -> Result<Self> {
        let mut lines = input
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let labels: Vec<String> = header.split(',').skip(1).map(str::to_string).collect();
        let n = labels.len();
        let mut rows = Vec::with_capacity(n);
        for (ln, line) in lines {
            let mut fields = line.split(',');
            let label = fields.next().unwrap_or_default();
            if rows.len() >= n || label != labels[rows.len()] {
                return Err(Error::parse(ln + 1, format!("unexpected row `{label}`")));
            }
            let values = fields
                .map(|v| v.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse(ln + 1, e.to_string()))?;
            if values.len() != n {
                return Err(Error::parse(ln + 1, format!("expected {n} values")));
            }
            rows.push(values);
        }
        if rows.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} rows for {n} labels",
                rows.len()
            )));
        }
        Ok(SymmetricMatrix::from_fn(labels, |i, j| rows[i][j]))
    }
}

/// Content similarity for every pair of corpus users, in corpus user order.
pub fn similarity_matrix(corpus: &Corpus) -> SymmetricMatrix {
    let idf = inverse_document_frequency(corpus);
    let vectors: Vec<SparseTermVector> = (0..corpus.len())
        .map(|u| tfidf_vector(corpus.tokens(u), &idf))
        .collect();
    SymmetricMatrix::from_fn(corpus.users().to_vec(), |i, j| {
        cosine_similarity(&vectors[i], &vectors[j])
    })
}
