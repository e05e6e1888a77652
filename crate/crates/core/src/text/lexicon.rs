use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use crate::error::{Error, Result};
use crate::text::{fold_char, is_word_char};

const BUILTIN_LEXICON: &str = include_str!("../../data/lexicon.txt");

/// The word inventory the segmenter matches against.
///
/// Entries are matched case-insensitively. An entry may be a multiword
/// Latin phrase ("Phnom Penh") whose words are separated by single spaces;
/// the segmenter then joins those words into one token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeSet<String>,
    folded: HashSet<String>,
    max_entry_len: usize,
    max_phrase_words: usize,
}

impl Lexicon {
    pub fn new<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut entries = BTreeSet::new();
        for word in words {
            let word = word.into();
            validate_entry(&word)?;
            entries.insert(word);
        }
        if entries.is_empty() {
            return Err(Error::Lexicon("lexicon has no entries".into()));
        }
        let folded = entries.iter().map(|e| fold(e)).collect();
        let max_entry_len = entries.iter().map(|e| e.chars().count()).max().unwrap_or(0);
        let max_phrase_words = entries
            .iter()
            .map(|e| e.split(' ').count())
            .max()
            .unwrap_or(1);
        Ok(Lexicon {
            entries,
            folded,
            max_entry_len,
            max_phrase_words,
        })
    }

    /// Parse the line-oriented lexicon format: one entry per line, blank
    /// lines ignored, `#` starts a comment line.
    pub fn parse(source: &str) -> Result<Self> {
        let mut words = Vec::new();
        for (n, line) in source.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            validate_entry(line).map_err(|e| Error::Lexicon(format!("line {}: {e}", n + 1)))?;
            words.push(line.to_string());
        }
        Lexicon::new(words)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let source = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Lexicon::parse(&source)
    }

    /// The sample lexicon bundled with the crate.
    pub fn builtin() -> Self {
        Lexicon::parse(BUILTIN_LEXICON).expect("bundled lexicon is valid")
    }

    /// A copy of this lexicon with extra entries (e.g. ontology labels).
    pub fn extended<I, S>(&self, words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Lexicon::new(
            self.entries
                .iter()
                .cloned()
                .chain(words.into_iter().map(Into::into)),
        )
    }

    pub fn entries(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Length in characters of the longest entry.
    pub fn max_entry_len(&self) -> usize {
        self.max_entry_len
    }

    pub(crate) fn max_phrase_words(&self) -> usize {
        self.max_phrase_words
    }

    /// Case-insensitive membership.
    pub fn contains(&self, word: &str) -> bool {
        self.folded.contains(&fold(word))
    }

    pub(crate) fn contains_folded(&self, folded: &str) -> bool {
        self.folded.contains(folded)
    }
}

pub(crate) fn fold(s: &str) -> String {
    s.chars().map(fold_char).collect()
}

fn validate_entry(word: &str) -> Result<()> {
    if word.is_empty() {
        return Err(Error::Lexicon("empty entry".into()));
    }
    if !word.contains(char::is_whitespace) {
        return Ok(());
    }
    // Only Latin phrases of single-space separated words may contain spaces.
    let well_formed = word
        .split(' ')
        .all(|part| !part.is_empty() && part.chars().all(is_word_char));
    if well_formed {
        Ok(())
    } else {
        Err(Error::Lexicon(format!("entry {word:?} contains whitespace")))
    }
}
