//! The bundled sample data: a 16-document Cambodian tourism corpus
//! (English and Khmer) with manual keywords and top-5 relevance judgements.

use crate::error::Result;
use crate::eval::GroundTruthSet;
use crate::index::{parse_corpus, CorpusRecord, IndexSnapshot, Indexer};
use crate::text::TextPipeline;

/// Evaluation time used with the sample corpus (2025-10-09 UTC), so that
/// recency decay is reproducible.
pub const SAMPLE_NOW: i64 = 1_760_000_000;

pub const CORPUS_JSONL: &str = include_str!("../data/corpus.jsonl");
pub const GROUND_TRUTH_JSONL: &str = include_str!("../data/ground_truth.jsonl");

pub fn corpus() -> Vec<CorpusRecord> {
    parse_corpus(CORPUS_JSONL, "data/corpus.jsonl").expect("bundled corpus parses")
}

/// Index the sample corpus with `pipeline`.
pub fn snapshot(pipeline: &TextPipeline) -> Result<IndexSnapshot> {
    let mut ix = Indexer::new(pipeline.clone());
    for rec in corpus() {
        ix.add_record(rec, SAMPLE_NOW)?;
    }
    Ok(ix.build_snapshot())
}

pub fn ground_truth() -> GroundTruthSet {
    GroundTruthSet::parse(GROUND_TRUTH_JSONL).expect("bundled ground truth parses")
}
