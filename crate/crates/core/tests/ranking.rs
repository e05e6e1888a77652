use proptest::prelude::*;

use kse::index::{build_snapshot, Popularity};
use kse::ontology::ExpansionConfig;
use kse::ranking::{
    combine_relevance, field_score, popularity_score, rank, recency_factor, search, sort_results, total_score,
    PopularityRanges, RankedResult, ScoreBreakdown, MARK_CLOSE, MARK_OPEN,
};
use kse::text::{Field, Lexicon, StopList};
use kse::{sample, Document, Error, ExpandedQuery, Ontology, RankingConfig, RankingMode, TextPipeline};

const DAY: i64 = 86_400;

fn pipeline() -> TextPipeline {
    TextPipeline::new(Lexicon::new(["x"]).unwrap(), StopList::new(["the", "of"]))
}

fn doc(title: &str, body: &str, at: i64) -> Document {
    Document::new(&pipeline(), title, body, None, at).unwrap()
}

fn query(q: &str) -> ExpandedQuery {
    ExpandedQuery::from_tokens(&pipeline().tokenize_query(q))
}

#[test]
fn field_score_hand_cosine() {
    // two-term query (1,1); title "alpha beta beta" over a 2-doc corpus
    let a = doc("alpha beta beta", "z", 0);
    let b = doc("beta", "z", 0);
    let snap = build_snapshot([a.clone(), b]);
    let idf_alpha = (3.0_f64 / 2.0).ln() + 1.0;
    let idf_beta = (3.0_f64 / 3.0).ln() + 1.0;
    let (va, vb) = (idf_alpha / 3.0, 2.0 * idf_beta / 3.0);
    let want = (va + vb) / (2.0_f64.sqrt() * (va * va + vb * vb).sqrt());
    let got = field_score(&query("alpha beta"), &a, Field::Title, snap.stats());
    assert!((got - want).abs() < 1e-12, "{got} vs {want}");

    let single = doc("solo", "z", 0);
    let snap = build_snapshot([single.clone()]);
    assert!((field_score(&query("solo"), &single, Field::Title, snap.stats()) - 1.0).abs() < 1e-12);
    assert_eq!(field_score(&query("absent"), &single, Field::Title, snap.stats()), 0.0);
}

#[test]
fn closed_forms() {
    let cfg = RankingConfig::default();
    assert_eq!(combine_relevance(1.0, 0.0, &cfg), 0.6);
    assert_eq!(combine_relevance(1.0, 1.0, &cfg), 1.0);
    assert_eq!(recency_factor(0, 0, &cfg), 1.0);
    assert!((recency_factor(0, 180 * DAY, &cfg) - 0.5).abs() < 1e-12);
    assert!((recency_factor(0, 360 * DAY, &cfg) - 0.25).abs() < 1e-12);
    assert!((total_score(0.5, 1.0, 0.5, &cfg) - (0.9 * 0.5 + 0.1) * 0.5).abs() < 1e-12);
}

#[test]
fn popularity_fixture() {
    let lo = Popularity { views: 10, ..Default::default() };
    let mid = Popularity { views: 40, ..Default::default() };
    let hi = Popularity { views: 110, clicks: 5, impressions: 5, rating_sum: 10.0, rating_count: 2 };
    let ranges = PopularityRanges::from_popularity([&lo, &mid, &hi]);
    assert_eq!(popularity_score(&lo, &ranges), 0.0);
    assert!((popularity_score(&mid, &ranges) - 0.3 / 3.0).abs() < 1e-12);
    assert_eq!(popularity_score(&hi, &ranges), 1.0);
}

#[test]
fn title_match_beats_identical_body_match() {
    let t = doc("river", "stone stone", 0);
    let b = doc("stone", "river stone", 0);
    let snap = build_snapshot([t.clone(), b]);
    let rs = rank("river", &pipeline(), &snap, None, &RankingConfig::default(), 0).unwrap();
    assert_eq!(rs[0].doc_id, t.doc_id);
}

#[test]
fn recency_and_popularity_break_relevance_ties() {
    let old = doc("river", "a", 0);
    let new = doc("river", "b", 0);
    let new = Document { ingested_at: 100 * DAY, ..new };
    let snap = build_snapshot([old.clone(), new.clone()]);
    let rs = rank("river", &pipeline(), &snap, None, &RankingConfig::default(), 100 * DAY).unwrap();
    assert_eq!(rs[0].doc_id, new.doc_id);

    let mut liked = doc("river", "c", 0);
    liked.popularity.views = 10;
    let plain = doc("river", "d", 0);
    let snap = build_snapshot([liked.clone(), plain]);
    let rs = rank("river", &pipeline(), &snap, None, &RankingConfig::default(), 0).unwrap();
    assert_eq!(rs[0].doc_id, liked.doc_id);
}

#[test]
fn normal_mode_counts_keyword_lists() {
    // query has 4 keywords; doc a holds 3 of them, b holds 1
    let a = doc("k1 k2", "k3 filler", 0);
    let b = doc("k4", "filler", 0);
    let snap = build_snapshot([a.clone(), b.clone()]);
    let out = search("k1 k2 k3 k4", RankingMode::Normal, &pipeline(), &snap, None, &RankingConfig::default(), 0).unwrap();
    assert_eq!(out.results[0].doc_id, a.doc_id);
    assert_eq!(out.results[0].total, 75.0);
    assert_eq!(out.results[0].breakdown.normal_rank, Some(75.0));
    assert_eq!(out.results[1].total, 25.0);
}

#[test]
fn errors() {
    let snap = build_snapshot([doc("a", "b", 0)]);
    let cfg = RankingConfig::default();
    assert!(matches!(rank("the of", &pipeline(), &snap, None, &cfg, 0), Err(Error::EmptyQuery)));
    assert!(matches!("fuzzy".parse::<RankingMode>(), Err(Error::UnknownMode(_))));
    assert_eq!("normal".parse::<RankingMode>().unwrap(), RankingMode::Normal);
    let bad = RankingConfig { top_n: 0, ..cfg.clone() };
    assert!(rank("a", &pipeline(), &snap, None, &bad, 0).is_err());
    let bad = RankingConfig { beta_popularity: 1.0, ..cfg };
    assert!(bad.validate().is_err());
}

#[test]
fn unmatched_query_gives_no_results() {
    let snap = build_snapshot([doc("a", "b", 0)]);
    let rs = rank("nothing", &pipeline(), &snap, None, &RankingConfig::default(), 0).unwrap();
    assert!(rs.is_empty());
}

#[test]
fn sample_results_are_bounded_deterministic_and_highlighted() {
    let p = TextPipeline::builtin();
    let snap = sample::snapshot(&p).unwrap();
    let ont = Ontology::builtin();
    let cfg = RankingConfig::default();
    for q in ["temples in Phnom Penh", "Angkor Wat", "beach island", "ទឹកធ្លាក់", "Khmer food"] {
        let a = rank(q, &p, &snap, Some(&ont), &cfg, sample::SAMPLE_NOW).unwrap();
        let b = rank(q, &p, &snap, Some(&ont), &cfg, sample::SAMPLE_NOW).unwrap();
        assert_eq!(a, b, "{q}");
        assert!(!a.is_empty() && a.len() <= cfg.top_n, "{q}");
        for r in &a {
            let bd = &r.breakdown;
            assert!((0.0..=1.0).contains(&r.total), "{q}: {}", r.total);
            assert!(bd.recency_factor > 0.0 && bd.recency_factor <= 1.0);
            assert!((0.0..=1.0).contains(&bd.popularity));
            assert!(r.snippet.contains(MARK_OPEN) && r.snippet.contains(MARK_CLOSE), "{q}: {}", r.snippet);
            let plain = r.snippet.chars().filter(|c| *c != MARK_OPEN && *c != MARK_CLOSE).count();
            assert!(plain <= cfg.snippet_len);
        }
    }
}

#[test]
fn expansion_can_be_disabled_in_config() {
    let p = TextPipeline::builtin();
    let snap = sample::snapshot(&p).unwrap();
    let ont = Ontology::builtin();
    let cfg = RankingConfig { expansion: ExpansionConfig::disabled(), ..Default::default() };
    let with_ont = rank("temples in Phnom Penh", &p, &snap, Some(&ont), &cfg, sample::SAMPLE_NOW).unwrap();
    let without = rank("temples in Phnom Penh", &p, &snap, None, &cfg, sample::SAMPLE_NOW).unwrap();
    assert_eq!(with_ont, without);
}

fn result(id: String, total: f64) -> RankedResult {
    RankedResult {
        doc_id: id.clone(),
        total,
        snippet: String::new(),
        breakdown: ScoreBreakdown {
            doc_id: id,
            score_title: 0.0,
            score_body: 0.0,
            keyword_score: 0.0,
            semantic_score: 0.0,
            relevance: 0.0,
            popularity: 0.0,
            recency_factor: 1.0,
            total,
            normal_rank: None,
        },
    }
}

proptest! {
    #[test]
    fn sort_order_and_tie_break(scores in prop::collection::vec((0u8..20, 0u8..4), 0..40)) {
        let mut rs: Vec<RankedResult> = scores
            .iter()
            .enumerate()
            .map(|(i, (id, s))| result(format!("{id:02}-{i:02}"), *s as f64 / 4.0))
            .collect();
        sort_results(&mut rs);
        for w in rs.windows(2) {
            prop_assert!(w[0].total > w[1].total || (w[0].total == w[1].total && w[0].doc_id < w[1].doc_id));
        }
    }

    #[test]
    fn total_is_monotone(rel in 0.0f64..1.0, pop in 0.0f64..1.0, rec in 0.01f64..1.0, d in 0.001f64..0.5) {
        let cfg = RankingConfig::default();
        let base = total_score(rel, pop, rec, &cfg);
        prop_assert!(total_score((rel + d).min(1.0), pop, rec, &cfg) > base);
        prop_assert!(total_score(rel, (pop + d).min(1.0), rec, &cfg) >= base);
        prop_assert!(total_score(rel, pop, (rec + d).min(1.0), &cfg) >= base);
        prop_assert!((0.0..=1.0).contains(&base));
    }

    #[test]
    fn scaling_views_keeps_popularity_order(views in prop::collection::vec(0u64..1000, 2..10), k in 1u64..50) {
        let pops: Vec<Popularity> = views.iter().map(|&v| Popularity { views: v, ..Default::default() }).collect();
        let scaled: Vec<Popularity> = views.iter().map(|&v| Popularity { views: v * k, ..Default::default() }).collect();
        let (r1, r2) = (PopularityRanges::from_popularity(&pops), PopularityRanges::from_popularity(&scaled));
        for i in 0..pops.len() {
            for j in 0..pops.len() {
                let a = popularity_score(&pops[i], &r1) < popularity_score(&pops[j], &r1);
                let b = popularity_score(&scaled[i], &r2) < popularity_score(&scaled[j], &r2);
                prop_assert_eq!(a, b);
            }
        }
    }
}
