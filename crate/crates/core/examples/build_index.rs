// Index a JSONL corpus, persist the snapshot and load it back.
//
// ```bash
// cargo run --example build_index -- /tmp/kse-index
// ```

use std::path::{Path, PathBuf};

use kse::index::{IndexSnapshot, Indexer};
use kse::sample;
use kse::text::TextPipeline;

pub fn run_example(dir: &Path) -> kse::Result<IndexSnapshot> {
    let mut indexer = Indexer::new(TextPipeline::builtin());
    for record in sample::corpus() {
        indexer.add_record(record, sample::SAMPLE_NOW)?;
    }
    let snapshot = indexer.build_snapshot();
    snapshot.persist(dir)?;
    println!(
        "wrote {} documents and {} terms to {}",
        snapshot.doc_count(),
        snapshot.postings().len(),
        dir.display()
    );

    let reloaded = IndexSnapshot::load(dir)?;
    assert_eq!(reloaded, snapshot);
    for p in reloaded.lookup("Phnom Penh") {
        println!("  phnom penh: {} title={} body={}", p.doc_id, p.tf_title, p.tf_body);
    }
    Ok(reloaded)
}

fn main() -> kse::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("kse-example-index"));
    run_example(&dir).map(|_| ())
}
