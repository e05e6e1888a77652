//! Document store and field-separated inverted index.
//!
//! Documents are staged in an [`Indexer`] and published as an immutable
//! [`IndexSnapshot`]; a snapshot is never updated in place, it is rebuilt.

mod html;
mod store;

pub use html::{extract_article, ingest_url};
pub use store::{CHECKSUM_FILE, DOCUMENTS_FILE, FORMAT_VERSION, MANIFEST_FILE, POSTINGS_FILE};

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::keywords::CorpusStats;
use crate::text::{normalize, Field, TextPipeline, TokenStream};

/// Popularity counters accumulated from user feedback.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Popularity {
    pub clicks: u64,
    pub impressions: u64,
    pub rating_sum: f64,
    pub rating_count: u64,
    pub views: u64,
}

impl Popularity {
    pub fn validate(&self) -> Result<()> {
        if self.clicks > self.impressions {
            return Err(Error::InvalidDocument(format!(
                "clicks ({}) exceed impressions ({})",
                self.clicks, self.impressions
            )));
        }
        if self.rating_count == 0 && self.rating_sum != 0.0 {
            return Err(Error::InvalidDocument("rating_sum without ratings".into()));
        }
        if !self.rating_sum.is_finite() || self.rating_sum < 0.0 {
            return Err(Error::InvalidDocument("rating_sum must be finite and non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
    pub title: String,
    pub body: String,
    pub title_tokens: TokenStream,
    pub body_tokens: TokenStream,
    #[serde(default)]
    pub popularity: Popularity,
    /// Seconds since the Unix epoch, UTC.
    pub ingested_at: i64,
}

/// Content hash of `(title, body)`, 16 hex digits.
pub fn doc_id(title: &str, body: &str) -> String {
    let mut h = Sha256::new();
    h.update(title.as_bytes());
    h.update([0u8]);
    h.update(body.as_bytes());
    hex::encode(&h.finalize()[..8])
}

impl Document {
    /// Tokenize and wrap a new document.
    pub fn new(
        pipeline: &TextPipeline,
        title: &str,
        body: &str,
        url: Option<String>,
        ingested_at: i64,
    ) -> Result<Self> {
        if title.trim().is_empty() {
            return Err(Error::EmptyTitle);
        }
        Ok(Document {
            doc_id: doc_id(title, body),
            url,
            title: title.to_string(),
            body: body.to_string(),
            title_tokens: pipeline.tokenize(title, Field::Title),
            body_tokens: pipeline.tokenize(body, Field::Body),
            popularity: Popularity::default(),
            ingested_at,
        })
    }

    pub fn field_tokens(&self, field: Field) -> &TokenStream {
        match field {
            Field::Title => &self.title_tokens,
            Field::Body | Field::Query => &self.body_tokens,
        }
    }
}

/// One line of a corpus JSONL file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
    pub title: String,
    pub body: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub popularity: Option<Popularity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ingested_at: Option<i64>,
}

/// Parse corpus JSONL: one JSON document per line, blank lines skipped.
/// `origin` only labels error messages.
pub fn parse_corpus(source: &str, origin: &str) -> Result<Vec<CorpusRecord>> {
    let mut out = Vec::new();
    for (n, line) in source.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: CorpusRecord = serde_json::from_str(line)
            .map_err(|e| Error::InvalidDocument(format!("{origin}:{}: {e}", n + 1)))?;
        out.push(rec);
    }
    Ok(out)
}

/// Read a corpus file; see [`parse_corpus`].
pub fn read_corpus(path: impl AsRef<Path>) -> Result<Vec<CorpusRecord>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(&text, &path.display().to_string())
}

/// Postings of one term in one document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Posting {
    pub doc_id: String,
    pub tf_title: u32,
    pub tf_body: u32,
}

/// Immutable inverted index over title and body.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexSnapshot {
    postings: BTreeMap<String, Vec<Posting>>,
    stats: CorpusStats,
    documents: BTreeMap<String, Document>,
    version: String,
}

impl Default for IndexSnapshot {
    fn default() -> Self {
        build_snapshot(Vec::new())
    }
}

/// Build postings and corpus statistics for a document set.
pub fn build_snapshot<I>(docs: I) -> IndexSnapshot
where
    I: IntoIterator<Item = Document>,
{
    let documents: BTreeMap<String, Document> =
        docs.into_iter().map(|d| (d.doc_id.clone(), d)).collect();
    let mut postings: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
    // documents iterate in doc_id order, so each list comes out sorted
    for doc in documents.values() {
        let mut counts: BTreeMap<&str, (u32, u32)> = BTreeMap::new();
        for t in &doc.title_tokens {
            counts.entry(&t.normalized).or_default().0 += 1;
        }
        for t in &doc.body_tokens {
            counts.entry(&t.normalized).or_default().1 += 1;
        }
        for (term, (tf_title, tf_body)) in counts {
            postings.entry(term.to_string()).or_default().push(Posting {
                doc_id: doc.doc_id.clone(),
                tf_title,
                tf_body,
            });
        }
    }
    let stats = CorpusStats::from_documents(documents.values());
    IndexSnapshot {
        postings,
        stats,
        documents,
        version: FORMAT_VERSION.to_string(),
    }
}

impl IndexSnapshot {
    /// Postings for `term` after normalization; empty for unknown terms.
    pub fn lookup(&self, term: &str) -> &[Posting] {
        let key = normalize(&term.split_whitespace().collect::<Vec<_>>().join(" "));
        self.postings.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn stats(&self) -> &CorpusStats {
        &self.stats
    }

    pub fn documents(&self) -> &BTreeMap<String, Document> {
        &self.documents
    }

    pub fn document(&self, doc_id: &str) -> Option<&Document> {
        self.documents.get(doc_id)
    }

    pub fn postings(&self) -> &BTreeMap<String, Vec<Posting>> {
        &self.postings
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn doc_count(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn persist(&self, dir: impl AsRef<Path>) -> Result<()> {
        store::persist(self, dir.as_ref())
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        store::load(dir.as_ref())
    }

    pub(crate) fn from_parts(
        postings: BTreeMap<String, Vec<Posting>>,
        documents: BTreeMap<String, Document>,
        version: String,
    ) -> Self {
        let stats = CorpusStats::from_documents(documents.values());
        IndexSnapshot {
            postings,
            stats,
            documents,
            version,
        }
    }
}

/// Single-writer staging area for documents.
#[derive(Debug, Clone)]
pub struct Indexer {
    pipeline: TextPipeline,
    docs: BTreeMap<String, Document>,
}

impl Indexer {
    pub fn new(pipeline: TextPipeline) -> Self {
        Indexer {
            pipeline,
            docs: BTreeMap::new(),
        }
    }

    /// Start from the documents of an existing snapshot.
    pub fn from_snapshot(pipeline: TextPipeline, snapshot: &IndexSnapshot) -> Self {
        Indexer {
            pipeline,
            docs: snapshot.documents.clone(),
        }
    }

    pub fn pipeline(&self) -> &TextPipeline {
        &self.pipeline
    }

    /// Stage a document; re-adding identical content returns the existing id.
    pub fn add_document(&mut self, title: &str, body: &str, url: Option<String>, now: i64) -> Result<String> {
        self.add(title, body, url, now).map(|(id, _)| id)
    }

    /// Like [`Indexer::add_document`], also reporting whether the document
    /// was new.
    pub fn add(&mut self, title: &str, body: &str, url: Option<String>, now: i64) -> Result<(String, bool)> {
        if title.trim().is_empty() {
            return Err(Error::EmptyTitle);
        }
        let id = doc_id(title, body);
        if self.docs.contains_key(&id) {
            return Ok((id, false));
        }
        let doc = Document::new(&self.pipeline, title, body, url, now)?;
        self.docs.insert(id.clone(), doc);
        Ok((id, true))
    }

    pub fn add_record(&mut self, rec: CorpusRecord, now: i64) -> Result<String> {
        let popularity = rec.popularity.unwrap_or_default();
        popularity.validate()?;
        let (id, fresh) = self.add(&rec.title, &rec.body, rec.url, rec.ingested_at.unwrap_or(now))?;
        if fresh {
            self.docs.get_mut(&id).expect("just inserted").popularity = popularity;
        }
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn get(&self, doc_id: &str) -> Option<&Document> {
        self.docs.get(doc_id)
    }

    pub fn get_mut(&mut self, doc_id: &str) -> Option<&mut Document> {
        self.docs.get_mut(doc_id)
    }

    pub fn contains(&self, doc_id: &str) -> bool {
        self.docs.contains_key(doc_id)
    }

    pub fn build_snapshot(&self) -> IndexSnapshot {
        build_snapshot(self.docs.values().cloned())
    }
}
