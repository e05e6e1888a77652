use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::Popularity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Impression,
    Click,
    Rating,
    View,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackEvent {
    pub doc_id: String,
    pub query: String,
    pub event: EventKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    pub at: i64,
}

impl FeedbackEvent {
    /// A rating carries a value in [1, 5]; other events carry none.
    pub fn validate(&self) -> Result<()> {
        match (self.event, self.value) {
            (EventKind::Rating, Some(v)) if (1.0..=5.0).contains(&v) => Ok(()),
            (EventKind::Rating, Some(v)) => Err(Error::InvalidFeedback(format!(
                "rating {v} outside [1, 5]"
            ))),
            (EventKind::Rating, None) => Err(Error::InvalidFeedback("rating event needs a value".into())),
            (_, Some(_)) => Err(Error::InvalidFeedback(format!(
                "{:?} event takes no value",
                self.event
            ))),
            (_, None) => Ok(()),
        }
    }

    /// Fold this event into a document's counters.
    pub fn apply(&self, pop: &mut Popularity) {
        match self.event {
            EventKind::Impression => pop.impressions += 1,
            EventKind::Click => pop.clicks += 1,
            EventKind::View => pop.views += 1,
            EventKind::Rating => {
                pop.rating_sum += self.value.unwrap_or_default();
                pop.rating_count += 1;
            }
        }
    }
}

/// Append-only JSONL log of feedback events.
#[derive(Debug, Clone)]
pub struct FeedbackLog {
    path: PathBuf,
}

impl FeedbackLog {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        FeedbackLog { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Append events as one write, flushed to disk before returning.
    pub fn append(&self, events: &[FeedbackEvent]) -> Result<()> {
        if events.is_empty() {
            return Ok(());
        }
        let mut buf = Vec::new();
        for e in events {
            serde_json::to_writer(&mut buf, e)?;
            buf.push(b'\n');
        }
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| Error::io(&self.path, e))?;
        file.write_all(&buf).map_err(|e| Error::io(&self.path, e))?;
        file.sync_data().map_err(|e| Error::io(&self.path, e))
    }

    /// Every event in the log; a missing file reads as empty.
    pub fn read_all(&self) -> Result<Vec<FeedbackEvent>> {
        let text = match fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(Error::io(&self.path, e)),
        };
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str(l).map_err(Error::from))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(event: EventKind, value: Option<f64>) -> FeedbackEvent {
        FeedbackEvent {
            doc_id: "d".into(),
            query: "q".into(),
            event,
            value,
            at: 0,
        }
    }

    #[test]
    fn rating_range() {
        assert!(ev(EventKind::Rating, Some(5.0)).validate().is_ok());
        assert!(ev(EventKind::Rating, Some(6.0)).validate().is_err());
        assert!(ev(EventKind::Rating, Some(0.5)).validate().is_err());
        assert!(ev(EventKind::Rating, None).validate().is_err());
        assert!(ev(EventKind::Click, Some(1.0)).validate().is_err());
        assert!(ev(EventKind::Click, None).validate().is_ok());
    }

    #[test]
    fn counters() {
        let mut p = Popularity::default();
        for e in [
            ev(EventKind::Impression, None),
            ev(EventKind::Click, None),
            ev(EventKind::View, None),
            ev(EventKind::Rating, Some(4.0)),
        ] {
            e.apply(&mut p);
        }
        assert_eq!((p.impressions, p.clicks, p.views, p.rating_count), (1, 1, 1, 1));
        assert_eq!(p.rating_sum, 4.0);
    }

    #[test]
    fn log_appends() {
        let dir = tempfile::tempdir().unwrap();
        let log = FeedbackLog::new(dir.path().join("sub/feedback.jsonl"));
        assert!(log.read_all().unwrap().is_empty());
        log.append(&[ev(EventKind::Click, None)]).unwrap();
        log.append(&[ev(EventKind::View, None), ev(EventKind::Rating, Some(2.0))]).unwrap();
        let all = log.read_all().unwrap();
        assert_eq!(all.len(), 3);
        assert_eq!(all[2].value, Some(2.0));
    }
}
