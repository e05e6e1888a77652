use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::text::normalize;

const BUILTIN_STOPWORDS: &str = include_str!("../../data/stopwords.txt");

/// Set of stop words, stored in normalized form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopList {
    words: HashSet<String>,
}

impl StopList {
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopList {
            words: words
                .into_iter()
                .map(|w| normalize(w.as_ref().trim()))
                .filter(|w| !w.is_empty())
                .collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    pub fn empty() -> Self {
        StopList::default()
    }

    /// Same line format as the lexicon.
    pub fn parse(source: &str) -> Result<Self> {
        let mut words = Vec::new();
        for (n, line) in source.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.contains(char::is_whitespace) {
                return Err(Error::StopList(format!(
                    "line {}: entry {line:?} contains whitespace",
                    n + 1
                )));
            }
            words.push(line);
        }
        Ok(StopList::new(words))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let source = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        StopList::parse(&source)
    }

    /// The bundled Khmer + English sample list.
    pub fn builtin() -> Self {
        StopList::parse(BUILTIN_STOPWORDS).expect("bundled stop list is valid")
    }

    pub fn contains(&self, normalized: &str) -> bool {
        self.words.contains(normalized)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}
