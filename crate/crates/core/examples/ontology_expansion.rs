// Expand a query through the built-in tourism ontology and compare
// entities with Wu-Palmer similarity.
//
// ```bash
// cargo run --example ontology_expansion
// ```

use kse::ontology::{expand_query, ExpandedQuery, ExpansionConfig, Ontology};
use kse::text::TextPipeline;

pub fn run_example() -> kse::Result<ExpandedQuery> {
    let ontology = Ontology::builtin();
    let pipeline = TextPipeline::builtin();

    let query = pipeline.tokenize_query("temples in Phnom Penh");
    let expanded = expand_query(&query, &ontology, &ExpansionConfig::default());
    for t in &expanded.original_terms {
        println!("{:<12} {:.2}  (query)", t.term, t.weight);
    }
    for t in &expanded.expansion_terms {
        println!("{:<12} {:.2}  {} of {}", t.term, t.weight, t.relation, t.entity);
    }

    println!();
    for (a, b) in [
        ("wat_phnom", "wat_botum"),
        ("wat_phnom", "angkor_wat"),
        ("wat_phnom", "national_museum"),
        ("wat_phnom", "phnom_penh"),
    ] {
        let lcs = ontology.lcs(a, b)?;
        println!("sim({a}, {b}) = {:.3}  via {lcs}", ontology.wu_palmer(a, b)?);
    }
    Ok(expanded)
}

fn main() -> kse::Result<()> {
    run_example().map(|_| ())
}
