use proptest::prelude::*;

use kse::text::{normalize, remove_stop_words, segment, segment_bytes, tokenize_query, Field, Lexicon, StopList};
use kse::{Error, TextPipeline};

fn surfaces(text: &str, lex: &Lexicon) -> Vec<String> {
    segment(text, lex).surfaces().map(str::to_string).collect()
}

/// Consonants only: every char is its own written unit, so the oracle can
/// work on plain char indices.
const CONSONANTS: &[char] = &['ក', 'ខ', 'គ', 'ង', 'ច', 'ឆ', 'ជ', 'ញ'];

fn khmer_word() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(CONSONANTS), 1..=4).prop_map(|v| v.into_iter().collect())
}

/// Longest entry at each position, else one char.
fn greedy_oracle(text: &[char], entries: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < text.len() {
        let mut best = 1;
        let mut known = false;
        for e in entries {
            let e: Vec<char> = e.chars().collect();
            if text[i..].starts_with(&e) && (!known || e.len() > best) {
                best = e.len();
                known = true;
            }
        }
        out.push(text[i..i + best].iter().collect());
        i += best;
    }
    out
}

proptest! {
    #[test]
    fn khmer_segmentation_is_greedy(
        entries in prop::collection::vec(khmer_word(), 1..8),
        text in prop::collection::vec(prop::sample::select(CONSONANTS), 0..30),
    ) {
        let lex = Lexicon::new(entries.clone()).unwrap();
        let s: String = text.iter().collect();
        let got: Vec<String> = segment(&s, &lex).surfaces().map(str::to_string).collect();
        prop_assert_eq!(got, greedy_oracle(&text, &entries));
    }

    #[test]
    fn tokens_reconstruct_their_source(
        entries in prop::collection::vec(khmer_word(), 1..6),
        parts in prop::collection::vec(prop_oneof![khmer_word(), "[a-z]{1,6}", Just(" ".to_string())], 0..12),
    ) {
        let lex = Lexicon::new(entries).unwrap();
        let text = parts.concat();
        let chars: Vec<char> = text.chars().collect();
        let ts = segment(&text, &lex);
        let mut prev_end = 0;
        for t in &ts {
            prop_assert!(t.char_offset >= prev_end);
            let at: String = chars[t.char_offset..t.char_end()].iter().collect();
            prop_assert_eq!(&at, &t.surface);
            prev_end = t.char_end();
        }
        let joined: String = ts.surfaces().collect();
        let expected: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        prop_assert_eq!(joined, expected);
    }

    #[test]
    fn normalize_is_idempotent(word in "[a-zA-Z]{0,10}( [a-zA-Z]{1,6})?|[ក-ឳ]{1,5}") {
        let once = normalize(&word);
        prop_assert_eq!(normalize(&once), once);
    }

    #[test]
    fn query_tokenization_composes(q in "[a-z]{1,6}( [a-z]{1,6}){0,5}") {
        let lex = Lexicon::new(["x"]).unwrap();
        let stops = StopList::new(["in", "the", "of"]);
        let direct: Vec<String> = tokenize_query(&q, &lex, &stops).normalized().map(str::to_string).collect();
        let composed: Vec<String> = remove_stop_words(segment(&q, &lex), &stops)
            .surfaces()
            .map(normalize)
            .collect();
        prop_assert_eq!(direct, composed);
    }
}

#[test]
fn latin_query_splits_on_whitespace() {
    let lex = Lexicon::new(["x"]).unwrap();
    let got = surfaces("best cultural sites in Phnom Penh", &lex);
    assert_eq!(got, ["best", "cultural", "sites", "in", "Phnom", "Penh"]);
}

#[test]
fn lexicon_phrase_joins_words() {
    let lex = Lexicon::new(["Phnom Penh"]).unwrap();
    let got = surfaces("best sites in Phnom Penh", &lex);
    assert_eq!(got, ["best", "sites", "in", "Phnom Penh"]);
}

#[test]
fn full_cover_splits_latin_word() {
    let lex = Lexicon::new(["ab", "abc", "c"]).unwrap();
    let got = surfaces("abcc", &lex);
    assert_eq!(got, ["abc", "c"]);
    let partial = surfaces("abcd", &lex);
    assert_eq!(partial, ["abcd"]);
}

#[test]
fn paper_stemming_examples() {
    assert_eq!(normalize("sites"), "site");
    assert_eq!(normalize("Temples"), "temple");
    assert_eq!(normalize("glass"), "glass");
    assert_eq!(normalize("bus"), "bus");
}

#[test]
fn unknown_khmer_keeps_marks_attached() {
    let lex = Lexicon::new(["ភ្នំពេញ"]).unwrap();
    let ts = segment("នៅភ្នំពេញ", &lex);
    let got: Vec<&str> = ts.surfaces().collect();
    assert_eq!(got, ["នៅ", "ភ្នំពេញ"]);
    assert!(ts.tokens[0].oov);
    assert!(!ts.tokens[1].oov);
}

#[test]
fn zero_width_space_separates() {
    let lex = Lexicon::new(["ភ្នំពេញ", "ទឹកធ្លាក់"]).unwrap();
    let got = surfaces("ទឹកធ្លាក់\u{200B}ភ្នំពេញ", &lex);
    assert_eq!(got, ["ទឹកធ្លាក់", "ភ្នំពេញ"]);
}

#[test]
fn invalid_utf8_is_rejected_with_offset() {
    let lex = Lexicon::new(["x"]).unwrap();
    let err = segment_bytes(b"ok \xff rest", &lex, Field::Body).unwrap_err();
    assert!(matches!(err, Error::Encoding(3)), "{err:?}");
}

#[test]
fn pipeline_tags_fields() {
    let p = TextPipeline::builtin();
    let ts = p.tokenize("Royal Palace", Field::Title);
    assert!(ts.iter().all(|t| t.field == Field::Title));
    let q = p.tokenize_query("the palace");
    assert!(q.iter().all(|t| t.field == Field::Query));
    assert_eq!(q.normalized().collect::<Vec<_>>(), ["palace"]);
}

#[test]
fn builtin_khmer_stop_words_are_removed() {
    let p = TextPipeline::builtin();
    let got: Vec<String> = p.tokenize_query("ប្រាសាទនៅសៀមរាប").normalized().map(str::to_string).collect();
    assert!(!got.iter().any(|t| t == "នៅ"), "{got:?}");
    assert!(got.iter().any(|t| t == "ប្រាសាទ"), "{got:?}");
}

#[test]
fn lexicon_rejects_bad_entries() {
    assert!(matches!(Lexicon::new(Vec::<String>::new()), Err(Error::Lexicon(_))));
    assert!(matches!(Lexicon::new(["a\tb"]), Err(Error::Lexicon(_))));
    assert!(matches!(Lexicon::new([" lead"]), Err(Error::Lexicon(_))));
}
