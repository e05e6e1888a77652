//! Precision / recall / F1 evaluation of keyword extraction and ranking.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::hash::Hash;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::IndexSnapshot;
use crate::keywords::extract_keywords;
use crate::ontology::Ontology;
use crate::ranking::{rank, RankingConfig};
use crate::text::{normalize, TextPipeline};

/// Precision, recall and F1 of `retrieved` against `relevant`, both taken
/// as sets. Empty denominators yield 0.
pub fn prf<T, R, V>(retrieved: R, relevant: V) -> (f64, f64, f64)
where
    T: Eq + Hash,
    R: IntoIterator<Item = T>,
    V: IntoIterator<Item = T>,
{
    let retrieved: HashSet<T> = retrieved.into_iter().collect();
    let relevant: HashSet<T> = relevant.into_iter().collect();
    let hits = retrieved.intersection(&relevant).count() as f64;
    let p = if retrieved.is_empty() { 0.0 } else { hits / retrieved.len() as f64 };
    let r = if relevant.is_empty() { 0.0 } else { hits / relevant.len() as f64 };
    let f1 = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    (p, r, f1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemScore {
    pub id: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Averages {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_item: Vec<ItemScore>,
    pub averages: Averages,
}

impl EvalReport {
    /// Build a report whose averages are the arithmetic means of the items.
    pub fn from_items(per_item: Vec<ItemScore>) -> Self {
        let n = per_item.len();
        let averages = if n == 0 {
            Averages::default()
        } else {
            let mean = |f: fn(&ItemScore) -> f64| per_item.iter().map(f).sum::<f64>() / n as f64;
            Averages {
                precision: mean(|i| i.precision),
                recall: mean(|i| i.recall),
                f1: mean(|i| i.f1),
            }
        };
        EvalReport { per_item, averages }
    }

    fn push_row(out: &mut String, width: usize, id: &str, p: f64, r: f64, f: f64) {
        let _ = writeln!(out, "{id:<width$}  {p:>9.4}  {r:>9.4}  {f:>9.4}");
    }

    /// Aligned table: one row per item, then an `Average` row.
    pub fn to_table(&self, id_header: &str) -> String {
        let width = self
            .per_item
            .iter()
            .map(|i| i.id.chars().count())
            .chain([id_header.len(), "Average".len()])
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(out, "{id_header:<width$}  {:>9}  {:>9}  {:>9}", "Precision", "Recall", "F1");
        for i in &self.per_item {
            Self::push_row(&mut out, width, &i.id, i.precision, i.recall, i.f1);
        }
        let a = &self.averages;
        Self::push_row(&mut out, width, "Average", a.precision, a.recall, a.f1);
        out
    }
}

/// Keyword evaluation, one report per field.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct KeywordEval {
    pub title: EvalReport,
    pub body: EvalReport,
}

impl KeywordEval {
    /// Side-by-side title and body columns, one row per document.
    pub fn to_table(&self) -> String {
        let width = self
            .title
            .per_item
            .iter()
            .map(|i| i.id.len())
            .chain(["Document".len(), "Average".len()])
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:^29}  {:^29}",
            "", "Title", "Body"
        );
        let _ = writeln!(
            out,
            "{:<width$}  {:>9} {:>9} {:>9}  {:>9} {:>9} {:>9}",
            "Document", "Precision", "Recall", "F1", "Precision", "Recall", "F1"
        );
        let row = |out: &mut String, id: &str, t: (f64, f64, f64), b: (f64, f64, f64)| {
            let _ = writeln!(
                out,
                "{id:<width$}  {:>9.4} {:>9.4} {:>9.4}  {:>9.4} {:>9.4} {:>9.4}",
                t.0, t.1, t.2, b.0, b.1, b.2
            );
        };
        for (t, b) in self.title.per_item.iter().zip(&self.body.per_item) {
            row(&mut out, &t.id, (t.precision, t.recall, t.f1), (b.precision, b.recall, b.f1));
        }
        let (t, b) = (&self.title.averages, &self.body.averages);
        row(&mut out, "Average", (t.precision, t.recall, t.f1), (b.precision, b.recall, b.f1));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ManualKeywords {
    pub title: BTreeSet<String>,
    pub body: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GroundTruthSet {
    pub keyword_truth: BTreeMap<String, ManualKeywords>,
    pub ranking_truth: BTreeMap<String, Vec<String>>,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum TruthRecord {
    Keywords {
        doc_id: String,
        #[serde(default)]
        title_keywords: Vec<String>,
        #[serde(default)]
        body_keywords: Vec<String>,
    },
    Ranking {
        query: String,
        top5: Vec<String>,
    },
}

fn normalized_set(words: Vec<String>) -> BTreeSet<String> {
    words
        .iter()
        .map(|w| normalize(&w.split_whitespace().collect::<Vec<_>>().join(" ")))
        .filter(|w| !w.is_empty())
        .collect()
}

impl GroundTruthSet {
    /// Parse JSONL records. Manual keywords are normalized on the way in.
    pub fn parse(source: &str) -> Result<Self> {
        let mut truth = GroundTruthSet::default();
        for (n, line) in source.lines().enumerate() {
            let line_no = n + 1;
            if line.trim().is_empty() {
                continue;
            }
            let record: TruthRecord = serde_json::from_str(line).map_err(|e| Error::TruthParse {
                line: line_no,
                detail: e.to_string(),
            })?;
            match record {
                TruthRecord::Keywords {
                    doc_id,
                    title_keywords,
                    body_keywords,
                } => {
                    let entry = ManualKeywords {
                        title: normalized_set(title_keywords),
                        body: normalized_set(body_keywords),
                    };
                    if truth.keyword_truth.insert(doc_id.clone(), entry).is_some() {
                        return Err(Error::TruthParse {
                            line: line_no,
                            detail: format!("duplicate keyword record for `{doc_id}`"),
                        });
                    }
                }
                TruthRecord::Ranking { query, top5 } => {
                    if top5.len() > 5 {
                        return Err(Error::TruthParse {
                            line: line_no,
                            detail: format!("query `{query}` lists {} documents, at most 5 allowed", top5.len()),
                        });
                    }
                    let mut seen = HashSet::new();
                    if let Some(dup) = top5.iter().find(|d| !seen.insert(d.as_str())) {
                        return Err(Error::DuplicateRanking {
                            query,
                            doc_id: dup.clone(),
                        });
                    }
                    if truth.ranking_truth.insert(query.clone(), top5).is_some() {
                        return Err(Error::TruthParse {
                            line: line_no,
                            detail: format!("duplicate ranking record for `{query}`"),
                        });
                    }
                }
            }
        }
        Ok(truth)
    }

    /// Every referenced document must exist in `snapshot`.
    pub fn validate(&self, snapshot: &IndexSnapshot) -> Result<()> {
        let referenced = self
            .keyword_truth
            .keys()
            .chain(self.ranking_truth.values().flatten());
        for id in referenced {
            if snapshot.document(id).is_none() {
                return Err(Error::UnknownDocument(id.clone()));
            }
        }
        Ok(())
    }
}

/// Read and validate a ground-truth file against the evaluated corpus.
pub fn load_ground_truth(path: impl AsRef<Path>, snapshot: &IndexSnapshot) -> Result<GroundTruthSet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let truth = GroundTruthSet::parse(&text)?;
    truth.validate(snapshot)?;
    Ok(truth)
}

/// Tool keywords against manual keywords for every document in the truth.
pub fn eval_keywords(
    snapshot: &IndexSnapshot,
    truth: &GroundTruthSet,
    k_title: usize,
    k_body: usize,
) -> Result<KeywordEval> {
    let mut title = Vec::new();
    let mut body = Vec::new();
    for (doc_id, manual) in &truth.keyword_truth {
        let doc = snapshot
            .document(doc_id)
            .ok_or_else(|| Error::UnknownDocument(doc_id.clone()))?;
        let ks = extract_keywords(doc, snapshot.stats(), k_title, k_body)?;
        let (p, r, f1) = prf(ks.title_terms(), manual.title.iter().map(String::as_str));
        title.push(ItemScore { id: doc_id.clone(), precision: p, recall: r, f1 });
        let (p, r, f1) = prf(ks.body_terms(), manual.body.iter().map(String::as_str));
        body.push(ItemScore { id: doc_id.clone(), precision: p, recall: r, f1 });
    }
    Ok(KeywordEval {
        title: EvalReport::from_items(title),
        body: EvalReport::from_items(body),
    })
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RankingEval {
    pub report: EvalReport,
    /// Requested queries without a truth entry.
    pub skipped: Vec<String>,
}

/// Engine top-n (as a set) against the truth list for each query.
///
/// With `queries` empty every query in the truth is evaluated.
pub fn eval_ranking(
    queries: &[String],
    pipeline: &TextPipeline,
    snapshot: &IndexSnapshot,
    ontology: Option<&Ontology>,
    cfg: &RankingConfig,
    truth: &GroundTruthSet,
    now: i64,
) -> Result<RankingEval> {
    if truth.ranking_truth.is_empty() {
        return Err(Error::TruthParse {
            line: 0,
            detail: "no ranking records in ground truth".into(),
        });
    }
    let requested: Vec<&String> = if queries.is_empty() {
        truth.ranking_truth.keys().collect()
    } else {
        queries.iter().collect()
    };
    let mut items = Vec::new();
    let mut skipped = Vec::new();
    for q in requested {
        let Some(relevant) = truth.ranking_truth.get(q) else {
            skipped.push(q.clone());
            continue;
        };
        let results = rank(q, pipeline, snapshot, ontology, cfg, now)?;
        let (p, r, f1) = prf(
            results.iter().map(|r| r.doc_id.as_str()),
            relevant.iter().map(String::as_str),
        );
        items.push(ItemScore { id: q.clone(), precision: p, recall: r, f1 });
    }
    Ok(RankingEval {
        report: EvalReport::from_items(items),
        skipped,
    })
}
