// Precision, recall and F1 of keyword extraction and ranking against the
// sample ground truth, printed as per-item tables with an Average row.
//
// ```bash
// cargo run --example evaluate
// ```

use kse::eval::{eval_keywords, eval_ranking, KeywordEval, RankingEval};
use kse::keywords::{DEFAULT_K_BODY, DEFAULT_K_TITLE};
use kse::ontology::Ontology;
use kse::ranking::RankingConfig;
use kse::sample;
use kse::text::TextPipeline;

pub fn run_example() -> kse::Result<(KeywordEval, RankingEval, RankingEval)> {
    let pipeline = TextPipeline::builtin();
    let snapshot = sample::snapshot(&pipeline)?;
    let truth = sample::ground_truth();
    truth.validate(&snapshot)?;
    let ontology = Ontology::builtin();
    let cfg = RankingConfig::default();

    let keywords = eval_keywords(&snapshot, &truth, DEFAULT_K_TITLE, DEFAULT_K_BODY)?;
    println!("{}", keywords.to_table());

    let now = sample::SAMPLE_NOW;
    let expanded = eval_ranking(&[], &pipeline, &snapshot, Some(&ontology), &cfg, &truth, now)?;
    println!("ranking with ontology expansion\n{}", expanded.report.to_table("Query"));
    let plain = eval_ranking(&[], &pipeline, &snapshot, None, &cfg, &truth, now)?;
    println!("ranking, keywords only\n{}", plain.report.to_table("Query"));
    Ok((keywords, expanded, plain))
}

fn main() -> kse::Result<()> {
    run_example().map(|_| ())
}
