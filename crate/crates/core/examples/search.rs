// The same query three ways: weighted with ontology expansion, weighted
// keyword-only, and normal (occurrence percentage) ranking.
//
// ```bash
// cargo run --example search -- "temples in Phnom Penh"
// ```

use kse::ontology::Ontology;
use kse::ranking::{search, RankingConfig, RankingMode, SearchOutcome};
use kse::sample;
use kse::text::TextPipeline;

pub fn run_example(query: &str) -> kse::Result<Vec<SearchOutcome>> {
    let pipeline = TextPipeline::builtin();
    let snapshot = sample::snapshot(&pipeline)?;
    let ontology = Ontology::builtin();
    let cfg = RankingConfig::default();

    let runs = [
        ("weighted + ontology", RankingMode::Weighted, Some(&ontology)),
        ("weighted, keywords only", RankingMode::Weighted, None),
        ("normal + ontology", RankingMode::Normal, Some(&ontology)),
    ];
    let mut outcomes = Vec::new();
    for (label, mode, ont) in runs {
        let outcome = search(query, mode, &pipeline, &snapshot, ont, &cfg, sample::SAMPLE_NOW)?;
        println!("== {label}");
        for (i, r) in outcome.results.iter().enumerate() {
            let title = &snapshot.documents()[&r.doc_id].title;
            println!("{:>2}. {:>8.4}  {title}", i + 1, r.total);
            println!("      {}", r.snippet);
        }
        outcomes.push(outcome);
    }
    Ok(outcomes)
}

fn main() -> kse::Result<()> {
    let query = std::env::args().nth(1).unwrap_or_else(|| "temples in Phnom Penh".into());
    run_example(&query).map(|_| ())
}
