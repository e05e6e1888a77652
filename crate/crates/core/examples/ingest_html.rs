// Turn an article page into a document: title from `<title>` (or `<h1>`),
// body from the paragraphs, then index it and search for it.
//
// ```bash
// cargo run --example ingest_html
// ```

use kse::index::{extract_article, Indexer};
use kse::ranking::{rank, RankingConfig};
use kse::sample;
use kse::text::TextPipeline;

const PAGE: &str = r#"<!doctype html>
<html>
<head><title>Silver Pagoda floor tiles</title><script>track();</script></head>
<body>
  <nav><a href="/">Home</a></nav>
  <article>
    <h1>Silver Pagoda floor tiles</h1>
    <p>The floor of the Silver Pagoda in Phnom Penh is laid with
       five thousand silver tiles, most hidden under carpets.</p>
    <p>វត្តព្រះកែវមរកតស្ថិតនៅក្នុងព្រះបរមរាជវាំង។</p>
  </article>
</body>
</html>"#;

pub fn run_example() -> kse::Result<String> {
    let (title, body) = extract_article(PAGE)?;
    println!("title: {title}\nbody:  {body}");

    let pipeline = TextPipeline::builtin();
    let mut indexer = Indexer::new(pipeline.clone());
    for rec in sample::corpus() {
        indexer.add_record(rec, sample::SAMPLE_NOW)?;
    }
    let id = indexer.add_document(&title, &body, Some("https://example.org/silver-pagoda".into()), sample::SAMPLE_NOW)?;
    let snapshot = indexer.build_snapshot();

    let results = rank("silver tiles", &pipeline, &snapshot, None, &RankingConfig::default(), sample::SAMPLE_NOW)?;
    for r in &results {
        println!("{:.4}  {}", r.total, snapshot.documents()[&r.doc_id].title);
    }
    Ok(id)
}

fn main() -> kse::Result<()> {
    run_example().map(|_| ())
}
