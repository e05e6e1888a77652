//! On-disk snapshot layout:
//!
//! ```text
//! index/
//!   manifest.json     {"format":"kse-index","version":"1","documents":N,"terms":M}
//!   documents.jsonl   one Document per line, ordered by doc_id
//!   postings.jsonl    {"term":..,"postings":[{doc_id,tf_title,tf_body}..]} per line, ordered by term
//!   CHECKSUMS         "<sha256 hex> <byte length> <file name>" per data file
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::index::{build_snapshot, Document, IndexSnapshot, Posting};

pub const FORMAT_VERSION: &str = "1";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const DOCUMENTS_FILE: &str = "documents.jsonl";
pub const POSTINGS_FILE: &str = "postings.jsonl";
pub const CHECKSUM_FILE: &str = "CHECKSUMS";

const FORMAT_NAME: &str = "kse-index";

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    format: String,
    version: String,
    documents: usize,
    terms: usize,
}

#[derive(Serialize, Deserialize)]
struct PostingLine {
    term: String,
    postings: Vec<Posting>,
}

fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    let tmp = dir.join(format!(".{name}.tmp"));
    let dst = dir.join(name);
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, &dst).map_err(|e| Error::io(&dst, e))
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub(crate) fn persist(snapshot: &IndexSnapshot, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let manifest = Manifest {
        format: FORMAT_NAME.into(),
        version: snapshot.version.clone(),
        documents: snapshot.documents.len(),
        terms: snapshot.postings.len(),
    };
    let mut manifest_bytes = serde_json::to_vec_pretty(&manifest)?;
    manifest_bytes.push(b'\n');

    let mut docs = Vec::new();
    for doc in snapshot.documents.values() {
        serde_json::to_writer(&mut docs, doc)?;
        docs.push(b'\n');
    }
    let mut postings = Vec::new();
    for (term, list) in &snapshot.postings {
        serde_json::to_writer(
            &mut postings,
            &PostingLine {
                term: term.clone(),
                postings: list.clone(),
            },
        )?;
        postings.push(b'\n');
    }

    let files = [
        (MANIFEST_FILE, &manifest_bytes),
        (DOCUMENTS_FILE, &docs),
        (POSTINGS_FILE, &postings),
    ];
    let mut checksums = String::new();
    for (name, bytes) in files {
        write_atomic(dir, name, bytes)?;
        checksums.push_str(&format!("{} {} {}\n", sha256_hex(bytes), bytes.len(), name));
    }
    // written last: a snapshot is complete once its checksum file is
    write_atomic(dir, CHECKSUM_FILE, checksums.as_bytes())
}

fn read(dir: &Path, name: &str) -> Result<Vec<u8>> {
    let path = dir.join(name);
    fs::read(&path).map_err(|e| Error::io(path, e))
}

fn verify_checksums(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>> {
    let listing = String::from_utf8(read(dir, CHECKSUM_FILE)?)
        .map_err(|_| Error::CorruptIndex(format!("{CHECKSUM_FILE} is not UTF-8")))?;
    let mut files = BTreeMap::new();
    for line in listing.lines().filter(|l| !l.trim().is_empty()) {
        let mut parts = line.splitn(3, ' ');
        let (Some(hash), Some(len), Some(name)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::CorruptIndex(format!("bad {CHECKSUM_FILE} line {line:?}")));
        };
        let len: usize = len
            .parse()
            .map_err(|_| Error::CorruptIndex(format!("bad length in {CHECKSUM_FILE} line {line:?}")))?;
        let bytes = read(dir, name)?;
        if bytes.len() < len {
            return Err(Error::Truncated(name.to_string()));
        }
        if bytes.len() != len || sha256_hex(&bytes) != hash {
            return Err(Error::Checksum(name.to_string()));
        }
        files.insert(name.to_string(), bytes);
    }
    for name in [MANIFEST_FILE, DOCUMENTS_FILE, POSTINGS_FILE] {
        if !files.contains_key(name) {
            return Err(Error::CorruptIndex(format!("{CHECKSUM_FILE} does not cover {name}")));
        }
    }
    Ok(files)
}

fn parse_lines<T: for<'de> Deserialize<'de>>(name: &str, bytes: &[u8]) -> Result<Vec<T>> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::CorruptIndex(format!("{name} is not UTF-8")))?;
    text.lines()
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(n, l)| {
            serde_json::from_str(l).map_err(|e| Error::CorruptIndex(format!("{name}:{}: {e}", n + 1)))
        })
        .collect()
}

pub(crate) fn load(dir: &Path) -> Result<IndexSnapshot> {
    // version first, so a newer writer is reported as such rather than as corruption
    let manifest: Manifest = serde_json::from_slice(&read(dir, MANIFEST_FILE)?)
        .map_err(|e| Error::CorruptIndex(format!("{MANIFEST_FILE}: {e}")))?;
    if manifest.format != FORMAT_NAME {
        return Err(Error::CorruptIndex(format!("unknown format `{}`", manifest.format)));
    }
    if manifest.version != FORMAT_VERSION {
        return Err(Error::Version {
            found: manifest.version,
            supported: FORMAT_VERSION.into(),
        });
    }

    let files = verify_checksums(dir)?;
    let docs: Vec<Document> = parse_lines(DOCUMENTS_FILE, &files[DOCUMENTS_FILE])?;
    let lines: Vec<PostingLine> = parse_lines(POSTINGS_FILE, &files[POSTINGS_FILE])?;
    if docs.len() != manifest.documents {
        return Err(Error::Truncated(DOCUMENTS_FILE.into()));
    }
    if lines.len() != manifest.terms {
        return Err(Error::Truncated(POSTINGS_FILE.into()));
    }

    let documents: BTreeMap<String, Document> = docs.into_iter().map(|d| (d.doc_id.clone(), d)).collect();
    let postings: BTreeMap<String, Vec<Posting>> =
        lines.into_iter().map(|l| (l.term, l.postings)).collect();
    let snapshot = IndexSnapshot::from_parts(postings, documents, manifest.version);

    let rebuilt = build_snapshot(snapshot.documents.values().cloned());
    if rebuilt.postings != snapshot.postings {
        return Err(Error::CorruptIndex("postings disagree with documents".into()));
    }
    Ok(snapshot)
}
