use std::path::{Path, PathBuf};

use clap::Parser;
use serde_json::Value;

use kse::cli::{run, Cli};
use kse::{sample, Error};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn kse(args: &[&str]) -> Result<String, Error> {
    let cli = Cli::try_parse_from(std::iter::once("kse").chain(args.iter().copied())).expect("valid arguments");
    let mut out = Vec::new();
    run(cli, &mut out)?;
    Ok(String::from_utf8(out).unwrap())
}

fn built_index() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let corpus = data("corpus.jsonl");
    let msg = kse(&["index", "build", "--corpus", corpus.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]).unwrap();
    assert!(msg.starts_with("indexed 16 documents"), "{msg}");
    dir
}

#[test]
fn build_then_search() {
    let dir = built_index();
    let ix = dir.path().to_str().unwrap();
    let now = sample::SAMPLE_NOW.to_string();
    let text = kse(&["search", "--index", ix, "--q", "temples in Phnom Penh", "--now", &now]).unwrap();
    assert!(text.contains("Wat Phnom"), "{text}");

    let json: Value = serde_json::from_str(&kse(&["search", "--index", ix, "--q", "Angkor Wat", "--json", "--top", "2", "--now", &now]).unwrap()).unwrap();
    assert_eq!(json["results"].as_array().unwrap().len(), 2);

    let explained = kse(&["search", "--index", ix, "--q", "Angkor Wat", "--explain", "--now", &now]).unwrap();
    assert!(explained.contains("recency"), "{explained}");

    let normal: Value = serde_json::from_str(&kse(&["search", "--index", ix, "--q", "beach island", "--ranking", "normal", "--json"]).unwrap()).unwrap();
    assert_eq!(normal["mode"], "normal");

    assert!(matches!(kse(&["search", "--index", ix, "--q", "x", "--ranking", "fuzzy"]), Err(Error::UnknownMode(_))));
    assert!(matches!(kse(&["search", "--index", ix, "--q", "the"]), Err(Error::EmptyQuery)));
}

#[test]
fn keyword_only_search_drops_wat_phnom() {
    let dir = built_index();
    let now = sample::SAMPLE_NOW.to_string();
    let text = kse(&["search", "--index", dir.path().to_str().unwrap(), "--q", "temples in Phnom Penh", "--no-ontology", "--now", &now]).unwrap();
    assert!(!text.contains("Wat Phnom"), "{text}");
}

#[test]
fn extract_keywords_from_html_and_json() {
    let dir = built_index();
    let work = tempfile::tempdir().unwrap();
    let html = work.path().join("page.html");
    std::fs::write(&html, "<title>Pagoda floor tiles</title><p>The Silver Pagoda floor is silver tiles.</p>").unwrap();
    let out: Value = serde_json::from_str(&kse(&["extract", "--doc", html.to_str().unwrap(), "--corpus", dir.path().to_str().unwrap(), "--k-title", "2", "--k-body", "3"]).unwrap()).unwrap();
    assert_eq!(out["title_keywords"].as_array().unwrap().len(), 2);
    assert_eq!(out["body_keywords"].as_array().unwrap().len(), 3);

    let json = work.path().join("doc.json");
    std::fs::write(&json, r#"{"title":"Bokor","body":"Hill station above Kampot."}"#).unwrap();
    let out: Value = serde_json::from_str(&kse(&["extract", "--doc", json.to_str().unwrap(), "--corpus", dir.path().to_str().unwrap()]).unwrap()).unwrap();
    assert_eq!(out["title_keywords"][0]["term"], "bokor");
}

#[test]
fn eval_commands_print_average_rows() {
    let dir = built_index();
    let ix = dir.path().to_str().unwrap();
    let truth = data("ground_truth.jsonl");
    let truth = truth.to_str().unwrap();
    let kw = kse(&["eval", "keywords", "--index", ix, "--truth", truth]).unwrap();
    assert!(kw.lines().last().unwrap().starts_with("Average"), "{kw}");

    let now = sample::SAMPLE_NOW.to_string();
    let rk = kse(&["eval", "ranking", "--index", ix, "--truth", truth, "--now", &now, "--query", "Angkor Wat", "--query", "unknown"]).unwrap();
    assert!(rk.contains("Average"), "{rk}");
    assert!(rk.contains("skipped (no ground truth): unknown"), "{rk}");
}

#[test]
fn ontology_commands() {
    let ont = data("ontology.json");
    let ok = kse(&["ontology", "validate", ont.to_str().unwrap()]).unwrap();
    assert!(ok.starts_with("ok: "), "{ok}");

    let bad = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(bad.path(), r#"{"entities":[{"id":"a","label":"a"}],"relations":[{"subject":"a","predicate":"is_a","object":"b"}]}"#).unwrap();
    assert!(matches!(kse(&["ontology", "validate", bad.path().to_str().unwrap()]), Err(Error::DanglingEndpoint { .. })));

    let text = kse(&["ontology", "expand", "--query", "temples in Phnom Penh"]).unwrap();
    assert!(text.contains("wat phnom"), "{text}");
}

#[test]
fn add_html_grows_the_index() {
    let dir = built_index();
    let page = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(page.path(), "<title>Kep</title><p>Crab market by the sea.</p>").unwrap();
    let msg = kse(&["index", "add-html", page.path().to_str().unwrap(), "--url", "http://example.test/kep", "--out", dir.path().to_str().unwrap()]).unwrap();
    assert!(!msg.is_empty());
    let text = kse(&["search", "--index", dir.path().to_str().unwrap(), "--q", "crab"]).unwrap();
    assert!(text.contains("Kep"), "{text}");
}

#[test]
fn missing_index_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(kse(&["search", "--index", dir.path().join("nope").to_str().unwrap(), "--q", "wat"]).is_err());
}
