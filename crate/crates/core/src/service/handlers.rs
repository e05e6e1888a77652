use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{FromRequest, Path, Query, Request, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::feedback::{EventKind, FeedbackEvent};
use super::{fetch_page, AppState, Writer};
use crate::error::Error;
use crate::index::{extract_article, Document, Popularity};
use crate::ranking::{search as run_search, RankingMode, ScoreBreakdown};

const MAX_TOP: usize = 100;
const PREVIEW_CHARS: usize = 280;

/// Error response: a status plus an `{error, detail}` body.
#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub error: &'static str,
    pub detail: String,
    pub upstream_status: Option<u16>,
}

impl ApiError {
    pub fn new(status: StatusCode, error: &'static str, detail: impl Into<String>) -> Self {
        ApiError {
            status,
            error,
            detail: detail.into(),
            upstream_status: None,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({ "error": self.error, "detail": self.detail });
        if let Some(s) = self.upstream_status {
            body["upstream_status"] = json!(s);
        }
        (self.status, Json(body)).into_response()
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let (status, code) = match &e {
            Error::EmptyQuery => (StatusCode::BAD_REQUEST, "empty_query"),
            Error::UnknownMode(_) => (StatusCode::UNPROCESSABLE_ENTITY, "unknown_mode"),
            Error::UnknownDocument(_) => (StatusCode::NOT_FOUND, "unknown_document"),
            Error::InvalidFeedback(_) => (StatusCode::BAD_REQUEST, "invalid_feedback"),
            Error::EmptyTitle | Error::InvalidDocument(_) | Error::Encoding(_) => {
                (StatusCode::BAD_REQUEST, "invalid_document")
            }
            Error::NoTitle | Error::EmptyBody => (StatusCode::UNPROCESSABLE_ENTITY, "extraction_failed"),
            Error::Fetch { .. } => (StatusCode::BAD_GATEWAY, "fetch_failed"),
            Error::Config(_) => (StatusCode::BAD_REQUEST, "invalid_request"),
            _ => (StatusCode::INTERNAL_SERVER_ERROR, "internal"),
        };
        let mut api = ApiError::new(status, code, e.to_string());
        if let Error::Fetch { status: Some(s), .. } = e {
            api.upstream_status = Some(s);
        }
        api
    }
}

/// `Json` whose rejections use the `{error, detail}` body (413 included).
pub struct ApiJson<T>(pub T);

impl<S, T> FromRequest<S> for ApiJson<T>
where
    Json<T>: FromRequest<S, Rejection = JsonRejection>,
    S: Send + Sync,
{
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        match Json::<T>::from_request(req, state).await {
            Ok(Json(v)) => Ok(ApiJson(v)),
            Err(rej) => {
                let status = rej.status();
                let code = if status == StatusCode::PAYLOAD_TOO_LARGE {
                    "payload_too_large"
                } else {
                    "invalid_json"
                };
                Err(ApiError::new(status, code, rej.body_text()))
            }
        }
    }
}

fn index_not_built() -> ApiError {
    ApiError::new(StatusCode::CONFLICT, "index_not_built", "index not built")
}

type ApiResult<T> = Result<T, ApiError>;

pub(crate) async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such route")
}

pub(crate) async fn health(State(state): State<Arc<AppState>>) -> Json<Value> {
    let docs = state.snapshot().map(|s| s.doc_count());
    Json(json!({
        "status": "ok",
        "indexed": docs.is_some(),
        "documents": docs.unwrap_or(0),
    }))
}

#[derive(Debug, Deserialize)]
pub(crate) struct SearchParams {
    q: Option<String>,
    mode: Option<String>,
    top: Option<usize>,
    explain: Option<String>,
}

#[derive(Debug, Serialize)]
struct ExpandedTermView<'a> {
    term: &'a str,
    weight: f64,
    source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    entity: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relation: Option<&'a str>,
}

#[derive(Debug, Serialize)]
struct ResultView<'a> {
    doc_id: &'a str,
    title: &'a str,
    url: Option<&'a str>,
    snippet: &'a str,
    total: f64,
    /// Full score components, present with `explain=1`.
    breakdown: Option<&'a ScoreBreakdown>,
}

fn parse_flag(name: &str, v: Option<&str>) -> ApiResult<bool> {
    match v {
        None | Some("0") | Some("false") | Some("") => Ok(false),
        Some("1") | Some("true") => Ok(true),
        Some(other) => Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            "invalid_request",
            format!("{name} must be 0 or 1, got `{other}`"),
        )),
    }
}

pub(crate) async fn search(
    State(state): State<Arc<AppState>>,
    params: Result<Query<SearchParams>, QueryRejection>,
) -> ApiResult<Json<Value>> {
    let Query(params) =
        params.map_err(|r| ApiError::new(StatusCode::BAD_REQUEST, "invalid_request", r.body_text()))?;
    let q = params.q.unwrap_or_default();
    if q.trim().is_empty() {
        return Err(Error::EmptyQuery.into());
    }
    let mode: RankingMode = params.mode.as_deref().unwrap_or("weighted").parse()?;
    let explain = parse_flag("explain", params.explain.as_deref())?;
    let mut cfg = state.ranking.clone();
    if let Some(top) = params.top {
        if top == 0 || top > MAX_TOP {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "invalid_request",
                format!("top must be in 1..={MAX_TOP}"),
            ));
        }
        cfg.top_n = top;
    }
    let snapshot = state.snapshot().ok_or_else(index_not_built)?;
    let now = state.now();
    let outcome = run_search(&q, mode, &state.pipeline, &snapshot, state.ontology.as_ref(), &cfg, now)?;

    let expanded: Vec<ExpandedTermView> = outcome
        .expanded
        .original_terms
        .iter()
        .map(|t| ExpandedTermView {
            term: &t.term,
            weight: t.weight,
            source: "query",
            entity: None,
            relation: None,
        })
        .chain(outcome.expanded.expansion_terms.iter().map(|t| ExpandedTermView {
            term: &t.term,
            weight: t.weight,
            source: "ontology",
            entity: Some(&t.entity),
            relation: Some(&t.relation),
        }))
        .collect();
    let results: Vec<ResultView> = outcome
        .results
        .iter()
        .map(|r| {
            let doc = &snapshot.documents()[&r.doc_id];
            ResultView {
                doc_id: &r.doc_id,
                title: &doc.title,
                url: doc.url.as_deref(),
                snippet: &r.snippet,
                total: r.total,
                breakdown: explain.then_some(&r.breakdown),
            }
        })
        .collect();
    let body = json!({
        "query": outcome.query,
        "mode": outcome.mode,
        "expanded_terms": expanded,
        "results": results,
    });

    // impressions feed the click-through denominator at the next rebuild
    let events: Vec<FeedbackEvent> = outcome
        .results
        .iter()
        .map(|r| FeedbackEvent {
            doc_id: r.doc_id.clone(),
            query: q.clone(),
            event: EventKind::Impression,
            value: None,
            at: now,
        })
        .collect();
    record(&mut *state.writer.lock().await, &events)?;

    Ok(Json(body))
}

fn record(writer: &mut Writer, events: &[FeedbackEvent]) -> ApiResult<()> {
    writer.log.append(events)?;
    for e in events {
        if let Some(doc) = writer.indexer.get_mut(&e.doc_id) {
            e.apply(&mut doc.popularity);
        }
    }
    Ok(())
}

fn preview(body: &str) -> String {
    body.chars().take(PREVIEW_CHARS).collect()
}

/// Stage a document and, unless reindexing is deferred, publish a rebuild.
async fn stage(
    state: &AppState,
    title: &str,
    body: &str,
    url: Option<String>,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let mut writer = state.writer.lock().await;
    let (doc_id, created) = writer.indexer.add(title, body, url.clone(), state.now())?;
    let published = state.snapshot().is_some_and(|s| s.document(&doc_id).is_some());
    let indexed = if created && !state.defer_reindex {
        state.publish(&writer)?;
        true
    } else {
        published
    };
    let status = if created { StatusCode::CREATED } else { StatusCode::OK };
    Ok((
        status,
        Json(json!({
            "doc_id": doc_id,
            "created": created,
            "indexed": indexed,
            "title": title,
            "body_preview": preview(body),
            "url": url,
        })),
    ))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct AddDocument {
    title: String,
    body: String,
    #[serde(default)]
    url: Option<String>,
}

pub(crate) async fn add_document(
    State(state): State<Arc<AppState>>,
    ApiJson(req): ApiJson<AddDocument>,
) -> ApiResult<(StatusCode, Json<Value>)> {
    stage(&state, &req.title, &req.body, req.url).await
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct AddUrl {
    url: String,
    /// Extract only; the client confirms by posting to `/documents`.
    #[serde(default)]
    preview_only: bool,
}

pub(crate) async fn add_url(
    State(state): State<Arc<AppState>>,
    ApiJson(req): ApiJson<AddUrl>,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let html = fetch_page(&state.http, &req.url).await?;
    let (title, body) = extract_article(&html)?;
    if req.preview_only {
        return Ok((
            StatusCode::OK,
            Json(json!({ "url": req.url, "title": title, "body": body })),
        ));
    }
    stage(&state, &title, &body, Some(req.url)).await
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct FeedbackRequest {
    doc_id: String,
    #[serde(default)]
    query: String,
    event: EventKind,
    #[serde(default)]
    value: Option<f64>,
}

pub(crate) async fn feedback(
    State(state): State<Arc<AppState>>,
    ApiJson(req): ApiJson<FeedbackRequest>,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let event = FeedbackEvent {
        doc_id: req.doc_id,
        query: req.query,
        event: req.event,
        value: req.value,
        at: state.now(),
    };
    event.validate()?;
    let mut writer = state.writer.lock().await;
    if !writer.indexer.contains(&event.doc_id) {
        return Err(Error::UnknownDocument(event.doc_id).into());
    }
    record(&mut writer, std::slice::from_ref(&event))?;
    Ok((StatusCode::ACCEPTED, Json(json!({ "accepted": true }))))
}

#[derive(Debug, Serialize)]
struct DocumentView<'a> {
    doc_id: &'a str,
    title: &'a str,
    body: &'a str,
    url: Option<&'a str>,
    popularity: &'a Popularity,
    ingested_at: i64,
    /// False while the document is staged but not yet published.
    indexed: bool,
}

fn view(doc: &Document, indexed: bool) -> Value {
    json!(DocumentView {
        doc_id: &doc.doc_id,
        title: &doc.title,
        body: &doc.body,
        url: doc.url.as_deref(),
        popularity: &doc.popularity,
        ingested_at: doc.ingested_at,
        indexed,
    })
}

pub(crate) async fn get_document(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> ApiResult<Json<Value>> {
    if let Some(doc) = state.snapshot().as_deref().and_then(|s| s.document(&id)) {
        return Ok(Json(view(doc, true)));
    }
    let writer = state.writer.lock().await;
    match writer.indexer.get(&id) {
        Some(doc) => Ok(Json(view(doc, false))),
        None => Err(Error::UnknownDocument(id).into()),
    }
}

pub(crate) async fn reindex(State(state): State<Arc<AppState>>) -> ApiResult<Json<Value>> {
    let writer = state.writer.lock().await;
    let snap = state.publish(&writer)?;
    Ok(Json(json!({ "documents": snap.doc_count(), "terms": snap.postings().len() })))
}
