use crate::error::{Error, Result};
use crate::text::{fold_char, is_separator, is_word_char, normalize, Field, Lexicon, Token, TokenStream};

/// Segment `text` into tokens tagged as query tokens.
pub fn segment(text: &str, lexicon: &Lexicon) -> TokenStream {
    segment_field(text, lexicon, Field::Query)
}

/// Segment raw bytes, rejecting invalid UTF-8.
pub fn segment_bytes(text: &[u8], lexicon: &Lexicon, field: Field) -> Result<TokenStream> {
    let text = std::str::from_utf8(text).map_err(|e| Error::Encoding(e.valid_up_to()))?;
    Ok(segment_field(text, lexicon, field))
}

/// Greedy longest-match segmentation.
///
/// Runs of non-word characters (Khmer and other unspaced scripts) emit, at
/// each position, the longest lexicon entry that matches there, or a single
/// out-of-vocabulary character when nothing matches. Latin/numeric words are
/// emitted whole unless greedy matching covers the whole word with lexicon
/// entries; consecutive words forming a lexicon phrase are joined.
pub fn segment_field(text: &str, lexicon: &Lexicon, field: Field) -> TokenStream {
    let chars: Vec<char> = text.chars().collect();
    let folded: Vec<char> = chars.iter().copied().map(fold_char).collect();
    let mut out = Segmenter {
        chars: &chars,
        folded: &folded,
        lexicon,
        field,
        tokens: Vec::new(),
    };
    out.run();
    TokenStream { tokens: out.tokens }
}

const COENG: char = '\u{17D2}';

fn is_khmer_mark(c: char) -> bool {
    matches!(c, '\u{17B4}'..='\u{17D3}' | '\u{17DD}')
}

struct Segmenter<'a> {
    chars: &'a [char],
    folded: &'a [char],
    lexicon: &'a Lexicon,
    field: Field,
    tokens: Vec<Token>,
}

impl Segmenter<'_> {
    fn run(&mut self) {
        let n = self.chars.len();
        let mut i = 0;
        while i < n {
            let c = self.chars[i];
            if is_separator(c) {
                i += 1;
            } else if is_word_char(c) {
                i = self.word_run(i);
            } else {
                let end = self.scan(i, |c| !is_separator(c) && !is_word_char(c));
                self.unspaced_run(i, end);
                i = end;
            }
        }
    }

    fn scan(&self, from: usize, pred: impl Fn(char) -> bool) -> usize {
        let mut end = from;
        while end < self.chars.len() && pred(self.chars[end]) {
            end += 1;
        }
        end
    }

    fn emit(&mut self, start: usize, end: usize, oov: bool) {
        let surface: String = self.chars[start..end].iter().collect();
        let normalized = if surface.contains(char::is_whitespace) {
            normalize(&surface.split_whitespace().collect::<Vec<_>>().join(" "))
        } else {
            normalize(&surface)
        };
        self.tokens.push(Token {
            surface,
            normalized,
            char_offset: start,
            field: self.field,
            oov,
        });
    }

    fn longest_match(&self, start: usize, limit: usize) -> Option<usize> {
        let max = self.lexicon.max_entry_len().min(limit - start);
        let mut candidate: String = self.folded[start..start + max].iter().collect();
        for len in (1..=max).rev() {
            if len < max {
                candidate.pop();
            }
            if self.lexicon.contains_folded(&candidate) {
                return Some(len);
            }
        }
        None
    }

    fn unspaced_run(&mut self, start: usize, end: usize) {
        let mut i = start;
        while i < end {
            match self.longest_match(i, end) {
                Some(len) => {
                    self.emit(i, i + len, false);
                    i += len;
                }
                None => {
                    let len = self.cluster_len(i, end);
                    self.emit(i, i + len, true);
                    i += len;
                }
            }
        }
    }

    /// Length of the written character at `start`: a base letter with its
    /// combining vowels and signs, and any coeng + subscript consonant pairs.
    /// Out-of-vocabulary fallback never separates a mark from its base.
    fn cluster_len(&self, start: usize, end: usize) -> usize {
        let mut j = start + 1;
        while j < end {
            if is_khmer_mark(self.chars[j]) || self.chars[j - 1] == COENG {
                j += 1;
            } else {
                break;
            }
        }
        j - start
    }

    /// Handles a Latin/numeric word starting at `start`; returns the index
    /// just past what was consumed.
    fn word_run(&mut self, start: usize) -> usize {
        if let Some(end) = self.phrase_at(start) {
            self.emit(start, end, false);
            return end;
        }
        let end = self.scan(start, is_word_char);
        let mut parts = Vec::new();
        let mut i = start;
        while i < end {
            match self.longest_match(i, end) {
                Some(len) => {
                    parts.push((i, i + len));
                    i += len;
                }
                None => break,
            }
        }
        if i == end {
            for (s, e) in parts {
                self.emit(s, e, false);
            }
        } else {
            self.emit(start, end, true);
        }
        end
    }

    /// Longest multiword lexicon phrase starting at `start`, if any.
    fn phrase_at(&self, start: usize) -> Option<usize> {
        let max_words = self.lexicon.max_phrase_words();
        if max_words < 2 {
            return None;
        }
        let mut ends = Vec::with_capacity(max_words);
        let mut i = start;
        while ends.len() < max_words {
            let end = self.scan(i, is_word_char);
            ends.push(end);
            let next = self.scan(end, |c| c.is_whitespace());
            if next == end || next >= self.chars.len() || !is_word_char(self.chars[next]) {
                break;
            }
            i = next;
        }
        for words in (2..=ends.len()).rev() {
            let end = ends[words - 1];
            let key = self.folded[start..end]
                .iter()
                .collect::<String>()
                .split_whitespace()
                .collect::<Vec<_>>()
                .join(" ");
            if self.lexicon.contains_folded(&key) {
                return Some(end);
            }
        }
        None
    }
}
