// Segment mixed Khmer and Latin text, then strip stop words from a query.
//
// ```bash
// cargo run --example segment
// ```

use kse::text::{Field, TextPipeline};

pub fn run_example() -> kse::Result<Vec<String>> {
    let pipeline = TextPipeline::builtin();

    // Khmer has no spaces between words; the lexicon drives the split.
    let text = "វត្តភ្នំស្ថិតនៅភ្នំពេញ។ Wat Phnom stands in Phnom Penh.";
    let tokens = pipeline.tokenize(text, Field::Body);
    for t in &tokens {
        let flag = if t.oov { " (oov)" } else { "" };
        println!("{:>3}  {:<14} -> {}{flag}", t.char_offset, t.surface, t.normalized);
    }

    // "waterfall in Phnom Penh": the locative particle is a stop word.
    let query = pipeline.tokenize_query("ទឹកធ្លាក់នៅភ្នំពេញ");
    let kept: Vec<String> = query.normalized().map(str::to_string).collect();
    println!("query tokens after stop-word removal: {}", kept.join(" | "));
    Ok(kept)
}

fn main() -> kse::Result<()> {
    run_example().map(|_| ())
}
