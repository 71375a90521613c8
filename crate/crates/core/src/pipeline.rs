//! End-to-end runs: texts and edges in, matrices, graph, partitions and
//! quality summaries out.
//!
//! A run writes into its output directory:
//!
//! | file                 | contents                                        |
//! |----------------------|-------------------------------------------------|
//! | `similarity.csv`     | content-similarity matrix (if a corpus is given) |
//! | `sentiment_bias.csv` | sentiment-bias matrix (corpus and lexicon given) |
//! | `graph.csv`          | the graph detection ran on                       |
//! | `partition_k{k}.json`| communities for each `k`, with quality report    |
//! | `quality_k{k}.json`  | the quality report alone                         |
//! | `summary.csv`        | `k,communities,modularity` per `k`               |

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::{load_corpus, load_edges, Corpus, EdgeList, TokenizerConfig};
use crate::detect::{detect, PartitionFile};
use crate::error::Error;
use crate::graph::{build_weighted_graph, structural_graph, WeightedGraph, DEFAULT_ALPHA};
use crate::metrics::quality_report;
use crate::sentiment::{bias_matrix, SentimentLexicon};
use crate::similarity::{similarity_matrix, SymmetricMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Edge weights fused from content similarity and sentiment bias.
    Weighted,
    /// Every edge weighs 1.
    Structural,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Weighted => "weighted",
            Mode::Structural => "structural",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub edges: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    /// Previously exported graph; skips all text processing when set.
    pub graph: Option<PathBuf>,
    pub k: Vec<usize>,
    pub alpha: f64,
    pub mode: Mode,
    pub out: PathBuf,
    /// Decimal places in exported matrices.
    pub precision: usize,
    pub no_matrices: bool,
    pub tokenizer: TokenizerConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: None,
            edges: None,
            lexicon: None,
            graph: None,
            k: vec![2, 3, 4],
            alpha: DEFAULT_ALPHA,
            mode: Mode::Weighted,
            out: PathBuf::from("out"),
            precision: 6,
            no_matrices: false,
            tokenizer: TokenizerConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(input: &str) -> Result<Self, PipelineError> {
        toml::from_str(input)
            .map_err(|e| PipelineError::new(Stage::Config, Error::Serialization(e.to_string())))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PipelineError> {
        let path = path.as_ref();
        let input = fs::read_to_string(path)
            .map_err(|e| PipelineError::new(Stage::Config, Error::io(path, e)))?;
        Self::from_toml(&input)
    }

    fn validate(&self) -> Result<(), PipelineError> {
        let fail = |msg: String| {
            Err(PipelineError::new(
                Stage::Config,
                Error::InvalidParameter(msg),
            ))
        };
        if self.k.is_empty() {
            return fail("at least one k is required".into());
        }
        if let Some(k) = self.k.iter().find(|&&k| k < 1) {
            return fail(format!("k = {k} must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return fail(format!("alpha {} outside [0, 1]", self.alpha));
        }
        Ok(())
    }
}

/// Pipeline step in which a failure occurred.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Corpus,
    Edges,
    Similarity,
    Sentiment,
    Graph,
    Detect,
    Metrics,
    Output,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Corpus => "corpus",
            Stage::Edges => "edges",
            Stage::Similarity => "similarity",
            Stage::Sentiment => "sentiment",
            Stage::Graph => "graph",
            Stage::Detect => "detect",
            Stage::Metrics => "metrics",
            Stage::Output => "output",
        })
    }
}

#[derive(Debug, thiserror::Error)]
#[error("stage `{stage}`: {source}")]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

impl PipelineError {
    pub fn new(stage: Stage, source: Error) -> Self {
        PipelineError { stage, source }
    }
}

trait AtStage<T> {
    fn at(self, stage: Stage) -> Result<T, PipelineError>;
}

impl<T> AtStage<T> for Result<T, Error> {
    fn at(self, stage: Stage) -> Result<T, PipelineError> {
        self.map_err(|e| PipelineError::new(stage, e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub k: usize,
    pub communities: usize,
    pub modularity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub mode: Mode,
    pub nodes: usize,
    pub edges: usize,
    pub total_weight: f64,
    pub rows: Vec<SummaryRow>,
}

impl RunReport {
    pub fn modularity_for(&self, k: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.k == k).map(|r| r.modularity)
    }
}

/// The graph detection runs on, plus whichever attribute matrices were computed.
pub struct PreparedGraph {
    pub graph: WeightedGraph,
    pub similarity: Option<SymmetricMatrix>,
    pub bias: Option<SymmetricMatrix>,
}

fn required<'a>(
    path: &'a Option<PathBuf>,
    stage: Stage,
    what: &str,
) -> Result<&'a Path, PipelineError> {
    path.as_deref().ok_or_else(|| {
        PipelineError::new(
            stage,
            Error::InvalidParameter(format!("{what} path is required")),
        )
    })
}

/// Loads inputs and builds the graph for `config.mode`.
///
/// The node set is every corpus user plus every edge endpoint. Users that
/// appear only in the edge list have no text, so both of their attribute
/// scores are 0.
pub fn prepare(config: &RunConfig) -> Result<PreparedGraph, PipelineError> {
    config.validate()?;
    if let Some(path) = &config.graph {
        let graph = WeightedGraph::load(path).at(Stage::Graph)?;
        return Ok(PreparedGraph {
            graph,
            similarity: None,
            bias: None,
        });
    }

    let edges = load_edges(required(&config.edges, Stage::Edges, "edge list")?).at(Stage::Edges)?;
    let corpus = match (&config.corpus, config.mode) {
        (Some(path), _) => Some(load_corpus(path, &config.tokenizer).at(Stage::Corpus)?),
        (None, Mode::Weighted) => {
            return Err(PipelineError::new(
                Stage::Corpus,
                Error::InvalidParameter(
                    "weighted mode needs a corpus (use --mode structural for edges only)".into(),
                ),
            ))
        }
        (None, Mode::Structural) => None,
    };
    let lexicon = match (&config.lexicon, config.mode) {
        (Some(path), _) => Some(SentimentLexicon::load(path).at(Stage::Sentiment)?),
        (None, Mode::Weighted) => {
            return Err(PipelineError::new(
                Stage::Sentiment,
                Error::InvalidParameter("weighted mode needs a sentiment lexicon".into()),
            ))
        }
        (None, Mode::Structural) => None,
    };
    prepare_from(
        &edges,
        corpus.as_ref(),
        lexicon.as_ref(),
        config.mode,
        config.alpha,
    )
}

/// In-memory counterpart of [`prepare`].
pub fn prepare_from(
    edges: &EdgeList,
    corpus: Option<&Corpus>,
    lexicon: Option<&SentimentLexicon>,
    mode: Mode,
    alpha: f64,
) -> Result<PreparedGraph, PipelineError> {
    let mut nodes: BTreeSet<String> = edges.endpoints().into_iter().map(str::to_string).collect();
    if let Some(c) = corpus {
        nodes.extend(c.users().iter().cloned());
    }
    let nodes: Vec<String> = nodes.into_iter().collect();

    let similarity = corpus.map(|c| similarity_matrix(c).reindex(&nodes));
    let bias = match (corpus, lexicon) {
        (Some(c), Some(l)) => Some(bias_matrix(c, l).reindex(&nodes)),
        _ => None,
    };
    let graph = match mode {
        Mode::Structural => structural_graph(edges, &nodes).at(Stage::Graph)?,
        Mode::Weighted => {
            let s = similarity.as_ref().ok_or_else(|| {
                PipelineError::new(
                    Stage::Similarity,
                    Error::InvalidParameter("no corpus".into()),
                )
            })?;
            let sv = bias.as_ref().ok_or_else(|| {
                PipelineError::new(
                    Stage::Sentiment,
                    Error::InvalidParameter("no lexicon".into()),
                )
            })?;
            build_weighted_graph(edges, s, sv, alpha).at(Stage::Graph)?
        }
    };
    Ok(PreparedGraph {
        graph,
        similarity,
        bias,
    })
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), PipelineError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| PipelineError::new(Stage::Output, Error::io(&path, e)))
}

/// Detects communities for every configured `k` on a prepared graph and
/// writes all artifacts to `config.out`.
pub fn run_prepared(
    config: &RunConfig,
    prepared: &PreparedGraph,
) -> Result<RunReport, PipelineError> {
    config.validate()?;
    let out = &config.out;
    fs::create_dir_all(out).map_err(|e| PipelineError::new(Stage::Output, Error::io(out, e)))?;

    if !config.no_matrices {
        if let Some(s) = &prepared.similarity {
            write(out, "similarity.csv", &s.to_csv(config.precision))?;
        }
        if let Some(sv) = &prepared.bias {
            write(out, "sentiment_bias.csv", &sv.to_csv(config.precision))?;
        }
    }
    let g = &prepared.graph;
    write(out, "graph.csv", &g.to_csv())?;

    let mut rows = Vec::with_capacity(config.k.len());
    for &k in &config.k {
        let partition = detect(g, k).at(Stage::Detect)?;
        let quality = quality_report(g, &partition).at(Stage::Metrics)?;
        let quality_json = serde_json::to_string_pretty(&quality)
            .map_err(|e| PipelineError::new(Stage::Output, Error::Serialization(e.to_string())))?;
        write(out, &format!("quality_k{k}.json"), &(quality_json + "\n"))?;
        rows.push(SummaryRow {
            k,
            communities: partition.communities(),
            modularity: quality.modularity,
        });
        write(
            out,
            &format!("partition_k{k}.json"),
            &PartitionFile::new(&partition, Some(quality)).to_json(),
        )?;
    }

    let mut summary = String::from("k,communities,modularity\n");
    for r in &rows {
        summary.push_str(&format!("{},{},{}\n", r.k, r.communities, r.modularity));
    }
    write(out, "summary.csv", &summary)?;

    Ok(RunReport {
        mode: config.mode,
        nodes: g.node_count(),
        edges: g.edge_count(),
        total_weight: g.total_weight(),
        rows,
    })
}

pub fn run(config: &RunConfig) -> Result<RunReport, PipelineError> {
    let prepared = prepare(config)?;
    run_prepared(config, &prepared)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub k: usize,
    pub weighted: f64,
    pub structural: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
}

/// Runs weighted and structural modes on the same inputs into
/// `out/weighted` and `out/structural`, and writes `out/comparison.csv`.
pub fn compare(config: &RunConfig) -> Result<ComparisonReport, PipelineError> {
    if config.graph.is_some() {
        return Err(PipelineError::new(
            Stage::Config,
            Error::InvalidParameter("compare needs raw inputs, not a prepared graph".into()),
        ));
    }
    let weighted = run(&RunConfig {
        mode: Mode::Weighted,
        out: config.out.join("weighted"),
        ..config.clone()
    })?;
    let structural = run(&RunConfig {
        mode: Mode::Structural,
        out: config.out.join("structural"),
        ..config.clone()
    })?;
    let rows: Vec<ComparisonRow> = weighted
        .rows
        .iter()
        .zip(&structural.rows)
        .map(|(w, s)| ComparisonRow {
            k: w.k,
            weighted: w.modularity,
            structural: s.modularity,
        })
        .collect();
    let mut table = String::from("k,modularity_weighted,modularity_structural\n");
    for r in &rows {
        table.push_str(&format!("{},{},{}\n", r.k, r.weighted, r.structural));
    }
    write(&config.out, "comparison.csv", &table)?;
    Ok(ComparisonReport { rows })
}

/// Quality of an existing partition file on an exported graph.
pub fn score(
    graph: &Path,
    partition: &Path,
) -> Result<crate::metrics::QualityReport, PipelineError> {
    let g = WeightedGraph::load(graph).at(Stage::Graph)?;
    let input = fs::read_to_string(partition)
        .map_err(|e| PipelineError::new(Stage::Detect, Error::io(partition, e)))?;
    let p = PartitionFile::from_json(&input)
        .and_then(|f| f.partition())
        .at(Stage::Detect)?;
    quality_report(&g, &p).at(Stage::Metrics)
}
