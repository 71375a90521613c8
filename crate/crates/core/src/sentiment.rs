//! Lexicon-based sentiment vectors and pairwise sentiment bias.
//!
//! Each user is a point in polar coordinates: the radius is emotional
//! intensity in [0, 1] and the angle encodes polarity (0 = positive,
//! pi/2 = neutral, pi = negative). Two users' vectors are added; the bias
//! value multiplies the normalized length of the sum by an angular
//! alignment weight, so it lies in [0, 1] like content similarity.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::path::Path;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::similarity::SymmetricMatrix;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SentimentLexicon {
    scores: HashMap<String, f64>,
}

impl SentimentLexicon {
    /// Terms are lowercased to match tokenizer output. Scores must lie in
    /// [-1, 1] and terms must be non-empty and unique.
    pub fn new<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: AsRef<str>,
    {
        let mut scores = HashMap::new();
        for (term, score) in entries {
            let term = term.as_ref().trim().to_lowercase();
            if term.is_empty() {
                return Err(Error::Lexicon("empty term".into()));
            }
            if !(-1.0..=1.0).contains(&score) {
                return Err(Error::Lexicon(format!(
                    "score {score} for `{term}` outside [-1, 1]"
                )));
            }
            if scores.insert(term.clone(), score).is_some() {
                return Err(Error::Lexicon(format!("duplicate term `{term}`")));
            }
        }
        Ok(SentimentLexicon { scores })
    }

    /// Parses `term<TAB>score` lines; `#` comments and blank lines are skipped.
    pub fn parse(input: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in input.lines().enumerate() {
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (term, score) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(i + 1, "expected `term<TAB>score`"))?;
            let score: f64 = score
                .trim()
                .parse()
                .map_err(|e| Error::parse(i + 1, format!("bad score: {e}")))?;
            entries.push((term.to_string(), score));
        }
        Self::new(entries)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let input = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&input)
    }

    pub fn score(&self, term: &str) -> Option<f64> {
        self.scores.get(term).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// TSV serialization in sorted term order.
    pub fn to_tsv(&self) -> String {
        let sorted: BTreeMap<_, _> = self.scores.iter().collect();
        sorted
            .into_iter()
            .map(|(t, s)| format!("{t}\t{s}\n"))
            .collect()
    }
}

/// Polar sentiment of one user: intensity `rho` in [0, 1], angle `theta` in [0, pi].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SentimentVector {
    pub rho: f64,
    pub theta: f64,
}

impl SentimentVector {
    pub fn neutral() -> Self {
        SentimentVector {
            rho: 0.0,
            theta: FRAC_PI_2,
        }
    }

    /// Maps a polarity in [-1, 1] to `(|p|, (1 - p) * pi/2)`.
    pub fn from_polarity(p: f64) -> Self {
        let p = p.clamp(-1.0, 1.0);
        if p == 0.0 {
            return Self::neutral();
        }
        SentimentVector {
            rho: p.abs(),
            theta: (1.0 - p) * FRAC_PI_2,
        }
    }

    fn cartesian(self) -> (f64, f64) {
        (self.rho * self.theta.cos(), self.rho * self.theta.sin())
    }
}

/// Composite of two sentiment vectors: normalized magnitude and alignment, both in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeSentiment {
    pub rho_n: f64,
    pub omega_n: f64,
}

/// Mean lexicon score over matched tokens, as a polar vector. No matches is neutral.
pub fn score_text(tokens: &[String], lexicon: &SentimentLexicon) -> SentimentVector {
    let (sum, n) = tokens
        .iter()
        .filter_map(|t| lexicon.score(t))
        .fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        return SentimentVector::neutral();
    }
    SentimentVector::from_polarity(sum / n as f64)
}

pub fn compose(a: SentimentVector, b: SentimentVector) -> CompositeSentiment {
    let (ax, ay) = a.cartesian();
    let (bx, by) = b.cartesian();
    let total = a.rho + b.rho;
    let rho_n = if total > 0.0 {
        ((ax + bx).hypot(ay + by) / total).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let omega_n = ((1.0 + (a.theta - b.theta).cos()) / 2.0).clamp(0.0, 1.0);
    CompositeSentiment { rho_n, omega_n }
}

pub fn bias_value(c: CompositeSentiment) -> f64 {
    c.rho_n * c.omega_n
}

/// Sentiment bias for every pair of corpus users, in corpus user order.
pub fn bias_matrix(corpus: &Corpus, lexicon: &SentimentLexicon) -> SymmetricMatrix {
    let vectors: Vec<SentimentVector> = (0..corpus.len())
        .map(|u| score_text(corpus.tokens(u), lexicon))
        .collect();
    SymmetricMatrix::from_fn(corpus.users().to_vec(), |i, j| {
        bias_value(compose(vectors[i], vectors[j]))
    })
}

/// Angle range check used by callers that build vectors by hand.
pub fn is_valid(v: SentimentVector) -> bool {
    (0.0..=1.0).contains(&v.rho) && (0.0..=PI).contains(&v.theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Document;

    const EPS: f64 = 1e-12;

    fn lexicon() -> SentimentLexicon {
        SentimentLexicon::new([("good", 1.0), ("bad", -1.0), ("ok", 0.4)]).unwrap()
    }

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < EPS
    }

    #[test]
    fn score_examples() {
        let lex = lexicon();
        assert_eq!(
            score_text(&toks("the bike"), &lex),
            SentimentVector::neutral()
        );
        let v = score_text(&toks("good bike good"), &lex);
        assert_eq!((v.rho, v.theta), (1.0, 0.0));
        assert_eq!(
            score_text(&toks("good bad"), &lex),
            SentimentVector::neutral()
        );
        let v = score_text(&toks("ok"), &lex);
        assert!(close(v.rho, 0.4) && close(v.theta, 0.6 * FRAC_PI_2));
    }

    #[test]
    fn compose_examples() {
        let pos = SentimentVector {
            rho: 1.0,
            theta: 0.0,
        };
        let neg = SentimentVector {
            rho: 1.0,
            theta: PI,
        };
        let c = compose(pos, pos);
        assert!(close(c.rho_n, 1.0) && close(c.omega_n, 1.0));
        let c = compose(pos, neg);
        assert!(close(c.rho_n, 0.0) && close(c.omega_n, 0.0));
        let c = compose(SentimentVector::neutral(), pos);
        assert!(close(c.rho_n, 1.0) && close(c.omega_n, 0.5));
        let c = compose(SentimentVector::neutral(), SentimentVector::neutral());
        assert_eq!(c.rho_n, 0.0);
    }

    #[test]
    fn bias_examples() {
        let bv = |rho_n, omega_n| bias_value(CompositeSentiment { rho_n, omega_n });
        assert_eq!(bv(1.0, 1.0), 1.0);
        assert_eq!(bv(0.0, 0.7), 0.0);
        assert!(close(bv(0.8, 0.5), 0.4));
    }

    #[test]
    fn matrix_examples() {
        let corpus = Corpus::from_documents(
            [
                Document::new("a", "good good ride"),
                Document::new("b", "good service"),
                Document::new("c", "bad bad"),
                Document::new("d", "nothing here"),
                Document::new("e", "plain words"),
            ],
            &Default::default(),
        )
        .unwrap();
        let m = bias_matrix(&corpus, &lexicon());
        assert!(close(m.get(0, 1), 1.0));
        assert!(close(m.get(0, 2), 0.0));
        assert_eq!(m.get(3, 4), 0.0);
        for i in 0..m.len() {
            assert_eq!(m.get(i, i), 0.0);
            for j in 0..m.len() {
                assert!((0.0..=1.0).contains(&m.get(i, j)));
            }
        }
    }

    #[test]
    fn lexicon_parsing() {
        let lex = SentimentLexicon::parse("# comment\nGood\t0.5\n\nbad\t-1\n").unwrap();
        assert_eq!(lex.score("good"), Some(0.5));
        assert_eq!(lex.score("bad"), Some(-1.0));
        assert_eq!(lex.len(), 2);
        assert!(matches!(
            SentimentLexicon::parse("x\t1.5"),
            Err(Error::Lexicon(_))
        ));
        assert!(matches!(
            SentimentLexicon::parse("x\t1\nX\t0"),
            Err(Error::Lexicon(_))
        ));
        assert!(matches!(
            SentimentLexicon::parse("x 1"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            SentimentLexicon::parse("\t1"),
            Err(Error::Lexicon(_))
        ));
        let round = SentimentLexicon::parse(&lex.to_tsv()).unwrap();
        assert_eq!(round, lex);
    }

    #[test]
    fn bias_decreases_with_angular_gap() {
        let base = SentimentVector {
            rho: 0.7,
            theta: 0.0,
        };
        let mut prev = f64::INFINITY;
        for step in 0..100 {
            let theta = PI * step as f64 / 99.0;
            let sv = bias_value(compose(base, SentimentVector { rho: 0.7, theta }));
            assert!(sv < prev || (step == 99 && sv <= prev));
            prev = sv;
        }
        assert!(prev.abs() < EPS);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn vector() -> impl Strategy<Value = SentimentVector> {
            (0.0f64..=1.0, 0.0f64..=PI).prop_map(|(rho, theta)| {
                if rho == 0.0 {
                    SentimentVector::neutral()
                } else {
                    SentimentVector { rho, theta }
                }
            })
        }

        proptest! {
            #[test]
            fn bias_symmetric_and_bounded(a in vector(), b in vector()) {
                let ab = bias_value(compose(a, b));
                prop_assert!((0.0..=1.0).contains(&ab));
                prop_assert!((ab - bias_value(compose(b, a))).abs() < EPS);
            }

            #[test]
            fn self_composition_is_maximal(rho in 1e-6f64..=1.0, theta in 0.0f64..=PI) {
                let v = SentimentVector { rho, theta };
                let c = compose(v, v);
                prop_assert!((c.rho_n - 1.0).abs() < EPS);
                prop_assert!((c.omega_n - 1.0).abs() < EPS);
            }

            #[test]
            fn polarity_mapping_is_valid(p in -1.0f64..=1.0) {
                let v = SentimentVector::from_polarity(p);
                prop_assert!(is_valid(v));
                prop_assert!((v.rho - p.abs()).abs() < EPS);
            }
        }
    }
}
