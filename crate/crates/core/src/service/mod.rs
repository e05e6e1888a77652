//! HTTP front end.
//!
//! Reads are served from an immutable [`IndexSnapshot`] behind an `Arc`;
//! a single writer (the staged [`Indexer`] plus the feedback log) rebuilds
//! and publishes a fresh snapshot by swapping the pointer. Feedback only
//! touches the staged documents, so it becomes visible at the next rebuild.

mod config;
mod feedback;
mod handlers;

pub use config::{ServiceConfig, DEFAULT_BIND, DEFAULT_MAX_BODY_BYTES, ENV_PREFIX, FEEDBACK_FILE};
pub use feedback::{EventKind, FeedbackEvent, FeedbackLog};
pub use handlers::{ApiError, ApiJson};

use std::path::PathBuf;
use std::sync::{Arc, RwLock};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use axum::extract::DefaultBodyLimit;
use axum::routing::{get, post};
use axum::Router;
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;

use crate::error::{Error, Result};
use crate::index::MANIFEST_FILE;
use crate::index::{IndexSnapshot, Indexer};
use crate::ontology::Ontology;
use crate::ranking::RankingConfig;
use crate::text::TextPipeline;

/// Source of "now" in Unix seconds; injectable for deterministic tests.
pub type Clock = Arc<dyn Fn() -> i64 + Send + Sync>;

pub fn system_clock() -> Clock {
    Arc::new(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs() as i64)
            .unwrap_or(0)
    })
}

const FETCH_TIMEOUT: Duration = Duration::from_secs(15);

pub(crate) struct Writer {
    pub(crate) indexer: Indexer,
    pub(crate) log: FeedbackLog,
}

pub struct AppState {
    pub(crate) pipeline: TextPipeline,
    pub(crate) ontology: Option<Ontology>,
    pub(crate) ranking: RankingConfig,
    pub(crate) index_dir: PathBuf,
    pub(crate) defer_reindex: bool,
    snapshot: RwLock<Option<Arc<IndexSnapshot>>>,
    pub(crate) writer: tokio::sync::Mutex<Writer>,
    pub(crate) clock: Clock,
    pub(crate) http: reqwest::Client,
}

impl AppState {
    /// Load lexicon, stop list, ontology and (if one exists) the persisted
    /// index. A missing index is not an error: the service starts empty and
    /// answers searches with 409 until something is indexed.
    pub fn new(cfg: &ServiceConfig) -> Result<Self> {
        cfg.validate()?;
        let pipeline = cfg.pipeline()?;
        let ontology = cfg.load_ontology()?;
        let snapshot = if cfg.index.join(MANIFEST_FILE).exists() {
            Some(IndexSnapshot::load(&cfg.index)?)
        } else {
            None
        };
        let indexer = match &snapshot {
            Some(s) => Indexer::from_snapshot(pipeline.clone(), s),
            None => Indexer::new(pipeline.clone()),
        };
        let http = reqwest::Client::builder()
            .timeout(FETCH_TIMEOUT)
            .build()
            .map_err(|e| Error::Config(format!("http client: {e}")))?;
        Ok(AppState {
            pipeline,
            ontology,
            ranking: cfg.ranking.clone(),
            index_dir: cfg.index.clone(),
            defer_reindex: cfg.defer_reindex,
            snapshot: RwLock::new(snapshot.map(Arc::new)),
            writer: tokio::sync::Mutex::new(Writer {
                indexer,
                log: FeedbackLog::new(cfg.feedback_path()),
            }),
            clock: system_clock(),
            http,
        })
    }

    pub fn with_clock(mut self, clock: Clock) -> Self {
        self.clock = clock;
        self
    }

    /// The currently published snapshot, if any.
    pub fn snapshot(&self) -> Option<Arc<IndexSnapshot>> {
        self.snapshot.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    /// Rebuild from the staged documents, persist, then swap the pointer.
    /// In-flight readers keep the snapshot they already hold.
    pub(crate) fn publish(&self, writer: &Writer) -> Result<Arc<IndexSnapshot>> {
        let snap = Arc::new(writer.indexer.build_snapshot());
        snap.persist(&self.index_dir)?;
        *self.snapshot.write().unwrap_or_else(|e| e.into_inner()) = Some(snap.clone());
        Ok(snap)
    }

    pub(crate) fn now(&self) -> i64 {
        (self.clock)()
    }
}

/// GET `url` and return the body text; transport failures and non-2xx
/// answers become [`Error::Fetch`].
pub async fn fetch_page(client: &reqwest::Client, url: &str) -> Result<String> {
    let fail = |status: Option<u16>, detail: String| Error::Fetch {
        url: url.to_string(),
        status,
        detail,
    };
    let resp = client.get(url).send().await.map_err(|e| fail(None, e.to_string()))?;
    let status = resp.status();
    if !status.is_success() {
        return Err(fail(Some(status.as_u16()), format!("upstream returned {status}")));
    }
    resp.text().await.map_err(|e| fail(Some(status.as_u16()), e.to_string()))
}

/// All routes, with CORS, the body-size limit and (optionally) static files.
pub fn router(state: Arc<AppState>, max_body_bytes: usize, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/health", get(handlers::health))
        .route("/search", get(handlers::search))
        .route("/documents", post(handlers::add_document))
        .route("/documents/from-url", post(handlers::add_url))
        .route("/documents/{id}", get(handlers::get_document))
        .route("/feedback", post(handlers::feedback))
        .route("/reindex", post(handlers::reindex))
        .with_state(state);
    let app = match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.fallback(handlers::not_found),
    };
    app.layer(DefaultBodyLimit::max(max_body_bytes))
        .layer(CorsLayer::permissive())
}

/// Bind and serve until Ctrl-C.
pub async fn serve(cfg: ServiceConfig) -> Result<()> {
    let addr = cfg.bind_addr()?;
    let state = Arc::new(AppState::new(&cfg)?);
    let app = router(state, cfg.max_body_bytes, cfg.static_dir.clone());
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|e| Error::io(format!("bind {addr}"), e))?;
    eprintln!("kse listening on http://{addr}");
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| Error::io("serve", e))
}
