//! Community detection on social interaction graphs whose edge weights fuse
//! two user attributes: tf-idf content similarity of their texts and the
//! agreement of their lexicon-scored sentiment.
//!
//! The flow mirrors the modules: [`corpus`] ingests texts and edges,
//! [`similarity`] and [`sentiment`] produce pairwise attribute matrices,
//! [`graph`] fuses them onto structural edges, [`detect`] seeds and grows
//! communities, and [`metrics`] scores partitions. [`pipeline`] runs it
//! end to end; [`fixtures`] bundles Zachary's karate club and a
//! planted-partition generator.

pub mod corpus;
pub mod detect;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod metrics;
pub mod pipeline;
pub mod sentiment;
pub mod similarity;

pub use corpus::{Corpus, Document, EdgeList, TokenizerConfig};
pub use detect::{detect, Partition, PartitionFile};
pub use error::{Error, Result};
pub use graph::WeightedGraph;
pub use metrics::{modularity, nmi, QualityReport};
pub use similarity::SymmetricMatrix;
