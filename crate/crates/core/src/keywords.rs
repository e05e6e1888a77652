//! TF-IDF statistics and per-document keyword extraction.
//!
//! Term frequency is length-normalized (`count / field length`) and inverse
//! document frequency uses the smoothed form `ln((1 + N) / (1 + df)) + 1`,
//! which is at least 1 and defined for terms the corpus has never seen.
//! Title and body keep separate document frequencies.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::Document;
use crate::text::{Field, TokenStream};

pub const DEFAULT_K_TITLE: usize = 5;
pub const DEFAULT_K_BODY: usize = 10;

/// Document frequencies for one field.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldStats {
    pub doc_count: usize,
    pub doc_freq: BTreeMap<String, usize>,
}

impl FieldStats {
    pub fn df(&self, term: &str) -> usize {
        self.doc_freq.get(term).copied().unwrap_or(0)
    }

    pub fn idf(&self, term: &str) -> f64 {
        smoothed_idf(self.doc_count, self.df(term))
    }

    fn add(&mut self, terms: &BTreeSet<&str>) {
        self.doc_count += 1;
        for term in terms {
            *self.doc_freq.entry((*term).to_string()).or_insert(0) += 1;
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub title: FieldStats,
    pub body: FieldStats,
    /// A document counts once if the term occurs in either field.
    pub pooled: FieldStats,
}

impl CorpusStats {
    pub fn from_documents<'a, I>(docs: I) -> Self
    where
        I: IntoIterator<Item = &'a Document>,
    {
        let mut stats = CorpusStats::default();
        for doc in docs {
            let title: BTreeSet<&str> = doc.title_tokens.normalized().collect();
            let body: BTreeSet<&str> = doc.body_tokens.normalized().collect();
            let pooled: BTreeSet<&str> = title.union(&body).copied().collect();
            stats.title.add(&title);
            stats.body.add(&body);
            stats.pooled.add(&pooled);
        }
        stats
    }

    pub fn doc_count(&self) -> usize {
        self.pooled.doc_count
    }

    pub fn field(&self, field: Field) -> &FieldStats {
        match field {
            Field::Title => &self.title,
            Field::Body => &self.body,
            Field::Query => &self.pooled,
        }
    }
}

pub(crate) fn smoothed_idf(doc_count: usize, df: usize) -> f64 {
    ((1.0 + doc_count as f64) / (1.0 + df as f64)).ln() + 1.0
}

/// Relative frequency of each normalized term in a field.
pub fn compute_tf(field_tokens: &TokenStream) -> BTreeMap<String, f64> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for t in field_tokens {
        *counts.entry(t.normalized.clone()).or_insert(0) += 1;
    }
    let total = field_tokens.len() as f64;
    counts
        .into_iter()
        .map(|(term, n)| (term, n as f64 / total))
        .collect()
}

pub fn compute_idf(stats: &FieldStats, term: &str) -> f64 {
    stats.idf(term)
}

/// `tf * idf` for every term in the field.
pub fn tfidf_vector(field_tokens: &TokenStream, stats: &FieldStats) -> BTreeMap<String, f64> {
    let mut v = compute_tf(field_tokens);
    for (term, w) in v.iter_mut() {
        *w *= stats.idf(term);
    }
    v
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedTerm {
    pub term: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordSet {
    pub doc_id: String,
    pub title_keywords: Vec<WeightedTerm>,
    pub body_keywords: Vec<WeightedTerm>,
}

impl KeywordSet {
    pub fn title_terms(&self) -> impl Iterator<Item = &str> {
        self.title_keywords.iter().map(|k| k.term.as_str())
    }

    pub fn body_terms(&self) -> impl Iterator<Item = &str> {
        self.body_keywords.iter().map(|k| k.term.as_str())
    }
}

fn top_k(field_tokens: &TokenStream, stats: &FieldStats, k: usize) -> Vec<WeightedTerm> {
    let mut terms: Vec<WeightedTerm> = tfidf_vector(field_tokens, stats)
        .into_iter()
        .map(|(term, weight)| WeightedTerm { term, weight })
        .collect();
    terms.sort_by(|a, b| b.weight.total_cmp(&a.weight).then_with(|| a.term.cmp(&b.term)));
    terms.truncate(k);
    terms
}

/// Top `k_title` title terms and top `k_body` body terms by TF-IDF weight,
/// ties broken by term.
pub fn extract_keywords(
    doc: &Document,
    stats: &CorpusStats,
    k_title: usize,
    k_body: usize,
) -> Result<KeywordSet> {
    if k_title == 0 || k_body == 0 {
        return Err(Error::Config("keyword counts must be at least 1".into()));
    }
    Ok(KeywordSet {
        doc_id: doc.doc_id.clone(),
        title_keywords: top_k(&doc.title_tokens, &stats.title, k_title),
        body_keywords: top_k(&doc.body_tokens, &stats.body, k_body),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::Document;
    use crate::text::{Lexicon, StopList, TextPipeline};

    fn pipeline() -> TextPipeline {
        TextPipeline::new(Lexicon::new(["x"]).unwrap(), StopList::empty())
    }

    fn doc(title: &str, body: &str) -> Document {
        Document::new(&pipeline(), title, body, None, 0).unwrap()
    }

    #[test]
    fn tf_examples() {
        let p = pipeline();
        let tf = compute_tf(&p.tokenize("a a b", Field::Body));
        assert_eq!(tf["a"], 2.0 / 3.0);
        assert_eq!(tf["b"], 1.0 / 3.0);
        assert!(compute_tf(&p.tokenize("", Field::Body)).is_empty());
        assert_eq!(compute_tf(&p.tokenize("x", Field::Body))["x"], 1.0);
    }

    #[test]
    fn idf_examples() {
        let one = FieldStats {
            doc_count: 1,
            doc_freq: [("t".to_string(), 1)].into(),
        };
        assert_eq!(compute_idf(&one, "t"), 1.0);
        let three = FieldStats {
            doc_count: 3,
            doc_freq: [("t".to_string(), 1), ("u".to_string(), 3)].into(),
        };
        // ln(4/2) + 1
        assert!((compute_idf(&three, "t") - 1.693_147_180_559_945_3).abs() < 1e-12);
        assert_eq!(compute_idf(&three, "u"), 1.0);
        // unseen term: df = 0
        assert!((compute_idf(&three, "zzz") - (4.0f64.ln() + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn idf_strictly_decreasing_in_df() {
        for n in 1..20 {
            for df in 0..n {
                assert!(smoothed_idf(n, df) > smoothed_idf(n, df + 1));
                assert!(smoothed_idf(n, df + 1) >= 1.0);
            }
        }
    }

    #[test]
    fn single_title_token_is_sole_keyword() {
        let d = doc("angkor", "some body text here");
        let stats = CorpusStats::from_documents([&d]);
        let ks = extract_keywords(&d, &stats, 5, 10).unwrap();
        assert_eq!(ks.title_terms().collect::<Vec<_>>(), vec!["angkor"]);
    }

    #[test]
    fn unique_term_outranks_ubiquitous() {
        let a = doc("a", "rare common");
        let b = doc("b", "common other");
        let c = doc("c", "common thing");
        let stats = CorpusStats::from_documents([&a, &b, &c]);
        let ks = extract_keywords(&a, &stats, 1, 10).unwrap();
        // tf = 1/2 each; idf(rare) = ln(4/2)+1, idf(common) = 1
        assert_eq!(ks.body_terms().collect::<Vec<_>>(), vec!["rare", "common"]);
        assert!((ks.body_keywords[0].weight - 0.5 * (2f64.ln() + 1.0)).abs() < 1e-12);
        assert!((ks.body_keywords[1].weight - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ties_break_by_term() {
        let a = doc("t", "zeta alpha mid");
        let stats = CorpusStats::from_documents([&a]);
        let ks = extract_keywords(&a, &stats, 1, 2).unwrap();
        assert_eq!(ks.body_terms().collect::<Vec<_>>(), vec!["alpha", "mid"]);
    }

    #[test]
    fn zero_k_rejected() {
        let a = doc("t", "b");
        let stats = CorpusStats::from_documents([&a]);
        assert!(extract_keywords(&a, &stats, 0, 1).is_err());
    }
}
