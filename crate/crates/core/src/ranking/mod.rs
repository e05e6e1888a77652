//! Multi-signal ranking.
//!
//! Per candidate document:
//!
//! ```text
//! keyword   = w_title * cos(query, title tf-idf) + w_body * cos(query, body tf-idf)
//! relevance = alpha * keyword + (1 - alpha) * semantic
//! total     = ((1 - beta) * relevance + beta * popularity) * recency
//! ```
//!
//! The alternative "normal" mode scores a document by the percentage of
//! query-keyword result lists it appears in.

mod score;
mod snippet;

pub use score::{
    combine_relevance, field_score, normal_rank_score, popularity_score, recency_factor, total_score,
    weighted_keyword_score, PopularityRanges,
};
pub use snippet::{generate_snippet, DEFAULT_SNIPPET_LEN, MARK_CLOSE, MARK_OPEN};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{Document, IndexSnapshot};
use crate::ontology::{expand_query, semantic_similarity, ExpandedQuery, ExpansionConfig, Ontology};
use crate::text::{Field, TextPipeline};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RankingConfig {
    /// Title weight (W1).
    pub w_title: f64,
    /// Body weight (W2).
    pub w_body: f64,
    pub alpha_keyword: f64,
    pub beta_popularity: f64,
    pub recency_half_life_days: f64,
    pub top_n: usize,
    pub snippet_len: usize,
    pub expansion: ExpansionConfig,
}

impl Default for RankingConfig {
    fn default() -> Self {
        RankingConfig {
            w_title: 0.7,
            w_body: 0.3,
            alpha_keyword: 0.6,
            beta_popularity: 0.1,
            recency_half_life_days: 180.0,
            top_n: 5,
            snippet_len: DEFAULT_SNIPPET_LEN,
            expansion: ExpansionConfig::default(),
        }
    }
}

impl RankingConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !self.w_title.is_finite() || !self.w_body.is_finite() || self.w_body < 0.0 {
            return bad("field weights must be finite and non-negative".into());
        }
        if (self.w_title + self.w_body - 1.0).abs() > 1e-9 {
            return bad(format!(
                "w_title + w_body must equal 1, got {} + {}",
                self.w_title, self.w_body
            ));
        }
        if self.w_title <= self.w_body {
            return bad(format!(
                "w_title ({}) must exceed w_body ({})",
                self.w_title, self.w_body
            ));
        }
        if !(0.0..=1.0).contains(&self.alpha_keyword) {
            return bad(format!("alpha_keyword must lie in [0, 1], got {}", self.alpha_keyword));
        }
        if !(0.0..1.0).contains(&self.beta_popularity) {
            return bad(format!("beta_popularity must lie in [0, 1), got {}", self.beta_popularity));
        }
        if !(self.recency_half_life_days > 0.0 && self.recency_half_life_days.is_finite()) {
            return bad("recency_half_life_days must be positive".into());
        }
        if self.top_n == 0 {
            return bad("top_n must be at least 1".into());
        }
        if self.snippet_len == 0 {
            return bad("snippet_len must be at least 1".into());
        }
        self.expansion.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankingMode {
    #[default]
    Weighted,
    Normal,
}

impl FromStr for RankingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weighted" => Ok(RankingMode::Weighted),
            "normal" => Ok(RankingMode::Normal),
            other => Err(Error::UnknownMode(other.to_string())),
        }
    }
}

impl fmt::Display for RankingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RankingMode::Weighted => "weighted",
            RankingMode::Normal => "normal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub doc_id: String,
    pub score_title: f64,
    pub score_body: f64,
    pub keyword_score: f64,
    pub semantic_score: f64,
    pub relevance: f64,
    pub popularity: f64,
    pub recency_factor: f64,
    pub total: f64,
    /// Occurrence percentage, set in normal mode where it replaces `total`
    /// as the ranking key.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal_rank: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedResult {
    pub doc_id: String,
    pub total: f64,
    pub snippet: String,
    pub breakdown: ScoreBreakdown,
}

/// Compute every weighted-mode component for one document.
pub fn score_document(
    eq: &ExpandedQuery,
    doc: &Document,
    snapshot: &IndexSnapshot,
    ranges: &PopularityRanges,
    cfg: &RankingConfig,
    now: i64,
) -> ScoreBreakdown {
    let stats = snapshot.stats();
    let score_title = field_score(eq, doc, Field::Title, stats);
    let score_body = field_score(eq, doc, Field::Body, stats);
    let keyword_score = weighted_keyword_score(score_title, score_body, cfg);
    let semantic_score = semantic_similarity(eq, doc);
    let relevance = combine_relevance(keyword_score, semantic_score, cfg);
    let popularity = popularity_score(&doc.popularity, ranges);
    let recency = recency_factor(doc.ingested_at, now, cfg);
    ScoreBreakdown {
        doc_id: doc.doc_id.clone(),
        score_title,
        score_body,
        keyword_score,
        semantic_score,
        relevance,
        popularity,
        recency_factor: recency,
        total: total_score(relevance, popularity, recency, cfg),
        normal_rank: None,
    }
}

/// Sort by total descending, then doc_id ascending.
pub fn sort_results(results: &mut [RankedResult]) {
    results.sort_by(|a, b| b.total.total_cmp(&a.total).then_with(|| a.doc_id.cmp(&b.doc_id)));
}

/// Documents with at least one query or expansion term in either field.
fn candidates<'s>(eq: &ExpandedQuery, snapshot: &'s IndexSnapshot) -> BTreeMap<&'s str, usize> {
    let mut hits: BTreeMap<&str, usize> = BTreeMap::new();
    for (term, _) in eq.terms() {
        for p in snapshot.lookup(term) {
            *hits.entry(p.doc_id.as_str()).or_insert(0) += 1;
        }
    }
    hits
}

/// Weighted-mode ranking for an already expanded query.
pub fn rank_expanded(
    eq: &ExpandedQuery,
    snapshot: &IndexSnapshot,
    cfg: &RankingConfig,
    now: i64,
) -> Result<Vec<RankedResult>> {
    if eq.is_empty() {
        return Err(Error::EmptyQuery);
    }
    let ranges = PopularityRanges::from_snapshot(snapshot);
    let mut results: Vec<RankedResult> = candidates(eq, snapshot)
        .into_keys()
        .map(|id| {
            let doc = &snapshot.documents()[id];
            let breakdown = score_document(eq, doc, snapshot, &ranges, cfg, now);
            RankedResult {
                doc_id: doc.doc_id.clone(),
                total: breakdown.total,
                snippet: String::new(),
                breakdown,
            }
        })
        .collect();
    sort_results(&mut results);
    results.truncate(cfg.top_n);
    attach_snippets(&mut results, eq, snapshot, cfg);
    Ok(results)
}

/// Normal-mode ranking: one result list per original query keyword; a
/// document's score is the percentage of those lists that contain it.
pub fn rank_normal(
    eq: &ExpandedQuery,
    snapshot: &IndexSnapshot,
    cfg: &RankingConfig,
    now: i64,
) -> Result<Vec<RankedResult>> {
    if eq.is_empty() {
        return Err(Error::EmptyQuery);
    }
    let lists = eq.original_terms.len();
    let mut occurrences: BTreeMap<&str, usize> = BTreeMap::new();
    for q in &eq.original_terms {
        for p in snapshot.lookup(&q.term) {
            *occurrences.entry(p.doc_id.as_str()).or_insert(0) += 1;
        }
    }
    let ranges = PopularityRanges::from_snapshot(snapshot);
    let mut results = Vec::with_capacity(occurrences.len());
    for (id, occ) in occurrences {
        let doc = &snapshot.documents()[id];
        let mut breakdown = score_document(eq, doc, snapshot, &ranges, cfg, now);
        let pct = normal_rank_score(occ, lists)?;
        breakdown.normal_rank = Some(pct);
        results.push(RankedResult {
            doc_id: doc.doc_id.clone(),
            total: pct,
            snippet: String::new(),
            breakdown,
        });
    }
    sort_results(&mut results);
    results.truncate(cfg.top_n);
    attach_snippets(&mut results, eq, snapshot, cfg);
    Ok(results)
}

fn attach_snippets(results: &mut [RankedResult], eq: &ExpandedQuery, snapshot: &IndexSnapshot, cfg: &RankingConfig) {
    for r in results {
        r.snippet = generate_snippet(&snapshot.documents()[&r.doc_id], eq, cfg.snippet_len);
    }
}

/// Tokenize and (optionally) expand a query.
pub fn prepare_query(
    query: &str,
    pipeline: &TextPipeline,
    ontology: Option<&Ontology>,
    cfg: &RankingConfig,
) -> Result<ExpandedQuery> {
    let ts = pipeline.tokenize_query(query);
    if ts.is_empty() {
        return Err(Error::EmptyQuery);
    }
    Ok(match ontology {
        Some(ont) => expand_query(&ts, ont, &cfg.expansion),
        None => ExpandedQuery::from_tokens(&ts),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub query: String,
    pub mode: RankingMode,
    pub expanded: ExpandedQuery,
    pub results: Vec<RankedResult>,
}

/// Full query path: tokenize, expand, rank in the chosen mode.
pub fn search(
    query: &str,
    mode: RankingMode,
    pipeline: &TextPipeline,
    snapshot: &IndexSnapshot,
    ontology: Option<&Ontology>,
    cfg: &RankingConfig,
    now: i64,
) -> Result<SearchOutcome> {
    cfg.validate()?;
    let expanded = prepare_query(query, pipeline, ontology, cfg)?;
    let results = match mode {
        RankingMode::Weighted => rank_expanded(&expanded, snapshot, cfg, now)?,
        RankingMode::Normal => rank_normal(&expanded, snapshot, cfg, now)?,
    };
    Ok(SearchOutcome {
        query: query.to_string(),
        mode,
        expanded,
        results,
    })
}

/// Weighted-mode ranking of a raw query string.
pub fn rank(
    query: &str,
    pipeline: &TextPipeline,
    snapshot: &IndexSnapshot,
    ontology: Option<&Ontology>,
    cfg: &RankingConfig,
    now: i64,
) -> Result<Vec<RankedResult>> {
    search(query, RankingMode::Weighted, pipeline, snapshot, ontology, cfg, now).map(|o| o.results)
}
