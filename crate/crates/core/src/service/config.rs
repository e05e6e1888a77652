use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ontology::{load_ontology, Ontology};
use crate::ranking::RankingConfig;
use crate::text::{Lexicon, StopList, TextPipeline};

pub const ENV_PREFIX: &str = "KSE_";
pub const DEFAULT_BIND: &str = "127.0.0.1:8080";
pub const DEFAULT_MAX_BODY_BYTES: usize = 1 << 20;
pub const FEEDBACK_FILE: &str = "feedback.jsonl";

/// Service and CLI settings. Paths left unset fall back to the built-in
/// lexicon, stop list and ontology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub bind: String,
    pub index: PathBuf,
    pub ontology: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub stoplist: Option<PathBuf>,
    /// Defaults to `feedback.jsonl` inside the index directory.
    pub feedback_log: Option<PathBuf>,
    /// Directory served at `/` (the browser console), if any.
    pub static_dir: Option<PathBuf>,
    /// Skip the rebuild after each added document; `POST /reindex` publishes.
    pub defer_reindex: bool,
    /// Disable ontology expansion entirely.
    pub no_ontology: bool,
    pub max_body_bytes: usize,
    pub ranking: RankingConfig,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            bind: DEFAULT_BIND.into(),
            index: PathBuf::from("index"),
            ontology: None,
            lexicon: None,
            stoplist: None,
            feedback_log: None,
            static_dir: None,
            defer_reindex: false,
            no_ontology: false,
            max_body_bytes: DEFAULT_MAX_BODY_BYTES,
            ranking: RankingConfig::default(),
        }
    }
}

fn parse_env<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{ENV_PREFIX}{key}: cannot parse `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" | "" => Ok(false),
        _ => Err(Error::Config(format!("{ENV_PREFIX}{key}: expected a boolean, got `{value}`"))),
    }
}

impl ServiceConfig {
    pub fn from_json(source: &str) -> Result<Self> {
        serde_json::from_str(source).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    /// Apply `KSE_*` overrides from `vars`; unrelated variables are ignored.
    pub fn apply_env<I, K, V>(&mut self, vars: I) -> Result<()>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        for (k, v) in vars {
            let Some(key) = k.as_ref().strip_prefix(ENV_PREFIX) else {
                continue;
            };
            let v = v.as_ref();
            match key {
                "BIND" => self.bind = v.to_string(),
                "INDEX" => self.index = v.into(),
                "ONTOLOGY" => self.ontology = Some(v.into()),
                "LEXICON" => self.lexicon = Some(v.into()),
                "STOPLIST" => self.stoplist = Some(v.into()),
                "FEEDBACK_LOG" => self.feedback_log = Some(v.into()),
                "STATIC_DIR" => self.static_dir = Some(v.into()),
                "DEFER_REINDEX" => self.defer_reindex = parse_bool(key, v)?,
                "NO_ONTOLOGY" => self.no_ontology = parse_bool(key, v)?,
                "MAX_BODY_BYTES" => self.max_body_bytes = parse_env(key, v)?,
                "W_TITLE" => self.ranking.w_title = parse_env(key, v)?,
                "W_BODY" => self.ranking.w_body = parse_env(key, v)?,
                "ALPHA" => self.ranking.alpha_keyword = parse_env(key, v)?,
                "BETA" => self.ranking.beta_popularity = parse_env(key, v)?,
                "HALF_LIFE_DAYS" => self.ranking.recency_half_life_days = parse_env(key, v)?,
                "TOP_N" => self.ranking.top_n = parse_env(key, v)?,
                "EXPANSION_WEIGHT" => self.ranking.expansion.weight = parse_env(key, v)?,
                _ => {}
            }
        }
        Ok(())
    }

    /// Config file (if given) overlaid with the process environment.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut cfg = match path {
            Some(p) => Self::from_path(p)?,
            None => Self::default(),
        };
        cfg.apply_env(std::env::vars())?;
        Ok(cfg)
    }

    pub fn bind_addr(&self) -> Result<SocketAddr> {
        let addr: SocketAddr = self
            .bind
            .parse()
            .map_err(|_| Error::Config(format!("bind address `{}` is not host:port", self.bind)))?;
        if addr.port() == 0 {
            return Err(Error::Config("port must be in 1..=65535".into()));
        }
        Ok(addr)
    }

    pub fn feedback_path(&self) -> PathBuf {
        self.feedback_log.clone().unwrap_or_else(|| self.index.join(FEEDBACK_FILE))
    }

    /// Check everything the service needs before it binds.
    pub fn validate(&self) -> Result<()> {
        self.bind_addr()?;
        self.ranking.validate()?;
        if self.max_body_bytes == 0 {
            return Err(Error::Config("max_body_bytes must be positive".into()));
        }
        let paths = [&self.ontology, &self.lexicon, &self.stoplist, &self.static_dir];
        for p in paths.into_iter().flatten() {
            if !p.exists() {
                return Err(Error::Config(format!("{} does not exist", p.display())));
            }
        }
        Ok(())
    }

    pub fn pipeline(&self) -> Result<TextPipeline> {
        let lexicon = match &self.lexicon {
            Some(p) => Lexicon::from_path(p)?,
            None => Lexicon::builtin(),
        };
        let stops = match &self.stoplist {
            Some(p) => StopList::from_path(p)?,
            None => StopList::builtin(),
        };
        Ok(TextPipeline::new(lexicon, stops))
    }

    pub fn load_ontology(&self) -> Result<Option<Ontology>> {
        if self.no_ontology {
            return Ok(None);
        }
        Ok(Some(match &self.ontology {
            Some(p) => load_ontology(p)?,
            None => Ontology::builtin(),
        }))
    }
}
