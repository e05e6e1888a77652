use crate::error::{Error, Result};
use crate::index::{Document, IndexSnapshot, Popularity};
use crate::keywords::{tfidf_vector, CorpusStats};
use crate::ontology::ExpandedQuery;
use crate::ranking::RankingConfig;
use crate::text::Field;
use crate::vector::cosine;

const SECONDS_PER_DAY: f64 = 86_400.0;

/// Cosine between the expanded query weights and the field's TF-IDF vector.
pub fn field_score(eq: &ExpandedQuery, doc: &Document, field: Field, stats: &CorpusStats) -> f64 {
    let v = tfidf_vector(doc.field_tokens(field), stats.field(field));
    cosine(&eq.weights(), &v)
}

/// `w_title * s_title + w_body * s_body`.
pub fn weighted_keyword_score(s_title: f64, s_body: f64, cfg: &RankingConfig) -> f64 {
    cfg.w_title * s_title + cfg.w_body * s_body
}

/// Occurrence percentage: `occurrences * 100 / total_result_entries`.
pub fn normal_rank_score(occurrences: usize, total_result_entries: usize) -> Result<f64> {
    if total_result_entries == 0 {
        return Err(Error::ZeroDenominator);
    }
    if occurrences > total_result_entries {
        return Err(Error::Config(format!(
            "occurrences ({occurrences}) exceed result entries ({total_result_entries})"
        )));
    }
    Ok(occurrences as f64 * 100.0 / total_result_entries as f64)
}

/// `alpha * keyword + (1 - alpha) * semantic`.
pub fn combine_relevance(keyword_score: f64, semantic_score: f64, cfg: &RankingConfig) -> f64 {
    cfg.alpha_keyword * keyword_score + (1.0 - cfg.alpha_keyword) * semantic_score
}

/// Corpus-wide view-count range used for min-max scaling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PopularityRanges {
    pub min_views: u64,
    pub max_views: u64,
    pub doc_count: usize,
}

impl PopularityRanges {
    pub fn from_snapshot(snapshot: &IndexSnapshot) -> Self {
        PopularityRanges::from_popularity(snapshot.documents().values().map(|d| &d.popularity))
    }

    pub fn from_popularity<'a, I>(pops: I) -> Self
    where
        I: IntoIterator<Item = &'a Popularity>,
    {
        let mut ranges = PopularityRanges {
            min_views: u64::MAX,
            max_views: 0,
            doc_count: 0,
        };
        for p in pops {
            ranges.min_views = ranges.min_views.min(p.views);
            ranges.max_views = ranges.max_views.max(p.views);
            ranges.doc_count += 1;
        }
        if ranges.doc_count == 0 {
            ranges.min_views = 0;
        }
        ranges
    }

    fn scale_views(&self, views: u64) -> f64 {
        if self.doc_count == 1 {
            return 0.5;
        }
        if self.max_views <= self.min_views {
            return 0.0;
        }
        let v = views.clamp(self.min_views, self.max_views);
        (v - self.min_views) as f64 / (self.max_views - self.min_views) as f64
    }
}

/// Mean of click-through rate, mean rating rescaled from [1, 5] to [0, 1],
/// and min-max scaled views.
pub fn popularity_score(pop: &Popularity, ranges: &PopularityRanges) -> f64 {
    let ctr = if pop.impressions == 0 {
        0.0
    } else {
        (pop.clicks as f64 / pop.impressions as f64).min(1.0)
    };
    let rating = if pop.rating_count == 0 {
        0.0
    } else {
        ((pop.rating_sum / pop.rating_count as f64 - 1.0) / 4.0).clamp(0.0, 1.0)
    };
    (ctr + rating + ranges.scale_views(pop.views)) / 3.0
}

/// Half-life decay `2^(-age_days / half_life)`; documents from the future
/// count as new.
pub fn recency_factor(ingested_at: i64, now: i64, cfg: &RankingConfig) -> f64 {
    let age_days = (now - ingested_at).max(0) as f64 / SECONDS_PER_DAY;
    (-age_days / cfg.recency_half_life_days).exp2()
}

/// `((1 - beta) * relevance + beta * popularity) * recency`.
pub fn total_score(relevance: f64, popularity: f64, recency: f64, cfg: &RankingConfig) -> f64 {
    ((1.0 - cfg.beta_popularity) * relevance + cfg.beta_popularity * popularity) * recency
}
