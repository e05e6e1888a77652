// Top TF-IDF keywords per field for every document of the sample corpus.
//
// ```bash
// cargo run --example keywords
// ```

use kse::keywords::{extract_keywords, KeywordSet, DEFAULT_K_BODY, DEFAULT_K_TITLE};
use kse::sample;
use kse::text::TextPipeline;

pub fn run_example() -> kse::Result<Vec<KeywordSet>> {
    let snapshot = sample::snapshot(&TextPipeline::builtin())?;
    let mut sets = Vec::new();
    for doc in snapshot.documents().values() {
        let ks = extract_keywords(doc, snapshot.stats(), DEFAULT_K_TITLE, DEFAULT_K_BODY)?;
        let fmt = |terms: &[kse::keywords::WeightedTerm]| {
            terms
                .iter()
                .map(|t| format!("{} {:.3}", t.term, t.weight))
                .collect::<Vec<_>>()
                .join(", ")
        };
        println!("{}  {}", doc.doc_id, doc.title);
        println!("    title: {}", fmt(&ks.title_keywords));
        println!("    body:  {}", fmt(&ks.body_keywords));
        sets.push(ks);
    }
    Ok(sets)
}

fn main() -> kse::Result<()> {
    run_example().map(|_| ())
}
