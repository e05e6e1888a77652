//! Semantic search over Khmer-script (and mixed Khmer/Latin) document
//! collections.
//!
//! The pipeline: [`text`] segments and normalizes, [`keywords`] extracts
//! TF-IDF keywords, [`ontology`] expands queries through an is-a taxonomy,
//! [`index`] stores immutable snapshots, [`ranking`] scores candidates and
//! [`eval`] measures keyword and ranking quality against ground truth.

pub mod cli;
pub mod error;
pub mod eval;
pub mod index;
pub mod keywords;
pub mod ontology;
pub mod ranking;
pub mod sample;
pub mod service;
pub mod text;
pub mod vector;

pub use error::{Error, Result};
pub use index::{Document, IndexSnapshot, Indexer};
pub use ontology::{ExpandedQuery, Ontology};
pub use ranking::{RankedResult, RankingConfig, RankingMode};
pub use text::{TextPipeline, Token, TokenStream};
