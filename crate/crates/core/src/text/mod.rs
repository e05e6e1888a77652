//! Text pipeline: lexicon-driven segmentation, stop-word removal and
//! normalization.
//!
//! Khmer is written without spaces between words, so Khmer runs are split by
//! greedy longest match against a [`Lexicon`]. Latin-script and numeric runs
//! are split on whitespace. Whitespace, zero-width space (U+200B) and
//! punctuation are hard boundaries and never appear inside a token, except
//! for the single spaces of a multiword lexicon phrase.

mod lexicon;
mod segment;
mod stoplist;

pub use lexicon::Lexicon;
pub use segment::{segment, segment_bytes, segment_field};
pub use stoplist::StopList;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Which part of a document (or the query) a token came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Title,
    Body,
    Query,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub normalized: String,
    /// Offset of the first character of `surface`, in chars.
    pub char_offset: usize,
    pub field: Field,
    /// Set for fallback tokens that did not come from the lexicon.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub oov: bool,
}

impl Token {
    /// Char offset one past the end of the surface.
    pub fn char_end(&self) -> usize {
        self.char_offset + self.surface.chars().count()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
}

impl TokenStream {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Token> {
        self.tokens.iter()
    }

    pub fn normalized(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.normalized.as_str())
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.surface.as_str())
    }
}

impl<'a> IntoIterator for &'a TokenStream {
    type Item = &'a Token;
    type IntoIter = std::slice::Iter<'a, Token>;

    fn into_iter(self) -> Self::IntoIter {
        self.tokens.iter()
    }
}

pub(crate) fn is_separator(c: char) -> bool {
    c.is_whitespace()
        || c == '\u{200B}'
        || c == '\u{FEFF}'
        || c.is_ascii_punctuation()
        || matches!(c,
            '\u{00A1}'..='\u{00BF}'
            | '\u{17D4}'..='\u{17DA}'
            | '\u{2010}'..='\u{2027}'
            | '\u{2030}'..='\u{205E}'
            | '\u{3000}'..='\u{303F}')
}

pub(crate) fn is_latin_letter(c: char) -> bool {
    c.is_ascii_alphabetic()
        || matches!(c, '\u{00C0}'..='\u{024F}' | '\u{1E00}'..='\u{1EFF}') && c.is_alphabetic()
}

/// Characters that form whitespace-delimited words (Latin letters and digits
/// of any script).
pub(crate) fn is_word_char(c: char) -> bool {
    is_latin_letter(c) || c.is_numeric()
}

pub(crate) fn is_khmer(c: char) -> bool {
    matches!(c, '\u{1780}'..='\u{17FF}' | '\u{19E0}'..='\u{19FF}')
}

pub(crate) fn fold_char(c: char) -> char {
    c.to_lowercase().next().unwrap_or(c)
}

/// Reduce a token to its base form.
///
/// Khmer has no productive inflection relevant here, so Khmer text passes
/// through unchanged. Latin words are lowercased and lose a single trailing
/// `s` when longer than three characters (`sites` -> `site`); words ending in
/// `ss` keep it so that the function stays idempotent. Multiword tokens are
/// normalized word by word.
pub fn normalize(token: &str) -> String {
    if !token.chars().any(is_latin_letter) {
        return token.to_string();
    }
    let mut out = String::with_capacity(token.len());
    for (i, word) in token.split(' ').enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&normalize_word(word));
    }
    out
}

fn normalize_word(word: &str) -> String {
    if !word.chars().any(is_latin_letter) {
        return word.to_string();
    }
    let mut lower = word.to_lowercase();
    if lower.chars().count() > 3 && lower.ends_with('s') && !lower.ends_with("ss") {
        lower.pop();
    }
    lower
}

/// Drop tokens whose normalized form is a stop word, preserving order.
pub fn remove_stop_words(ts: TokenStream, stops: &StopList) -> TokenStream {
    TokenStream {
        tokens: ts
            .tokens
            .into_iter()
            .filter(|t| !stops.contains(&t.normalized))
            .collect(),
    }
}

fn normalize_stream(ts: TokenStream) -> TokenStream {
    TokenStream {
        tokens: ts
            .tokens
            .into_iter()
            .map(|mut t| {
                t.normalized = normalize(&t.normalized);
                t
            })
            .collect(),
    }
}

/// Segment, drop stop words and normalize a query.
pub fn tokenize_query(q: &str, lexicon: &Lexicon, stops: &StopList) -> TokenStream {
    normalize_stream(remove_stop_words(segment(q, lexicon), stops))
}

/// A lexicon and stop list bundled together, used to tokenize both
/// documents and queries the same way.
#[derive(Debug, Clone)]
pub struct TextPipeline {
    pub lexicon: Lexicon,
    pub stops: StopList,
}

impl TextPipeline {
    /// Khmer stop words are added to the lexicon: without spaces between
    /// words, a stop word can only be removed if it segments as a unit.
    pub fn new(lexicon: Lexicon, stops: StopList) -> Self {
        let khmer_stops: Vec<&str> = stops
            .iter()
            .filter(|w| w.chars().any(is_khmer) && !w.contains(char::is_whitespace))
            .filter(|w| !lexicon.contains(w))
            .collect();
        let lexicon = if khmer_stops.is_empty() {
            lexicon
        } else {
            lexicon.extended(khmer_stops).expect("stop words are valid lexicon entries")
        };
        TextPipeline { lexicon, stops }
    }

    /// The bundled sample lexicon and stop list.
    pub fn builtin() -> Self {
        TextPipeline::new(Lexicon::builtin(), StopList::builtin())
    }

    pub fn tokenize(&self, text: &str, field: Field) -> TokenStream {
        normalize_stream(remove_stop_words(
            segment_field(text, &self.lexicon, field),
            &self.stops,
        ))
    }

    pub fn tokenize_bytes(&self, text: &[u8], field: Field) -> Result<TokenStream> {
        let ts = segment_bytes(text, &self.lexicon, field)?;
        Ok(normalize_stream(remove_stop_words(ts, &self.stops)))
    }

    pub fn tokenize_query(&self, q: &str) -> TokenStream {
        tokenize_query(q, &self.lexicon, &self.stops)
    }
}
