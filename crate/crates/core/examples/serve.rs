// Start the HTTP service on an ephemeral port over a freshly built sample
// index, exercise each endpoint once, then shut down.
//
// ```bash
// cargo run --example serve
// ```
//
// For a long-running server use the binary: `kse serve --index <dir>`.

use std::sync::Arc;

use kse::sample;
use kse::service::{router, AppState, ServiceConfig};
use kse::text::TextPipeline;
use serde_json::{json, Value};

fn with_json(req: reqwest::RequestBuilder, body: &Value) -> reqwest::RequestBuilder {
    req.header("content-type", "application/json").body(body.to_string())
}

async fn call(req: reqwest::RequestBuilder) -> (u16, Value) {
    let resp = req.send().await.expect("service reachable");
    let status = resp.status().as_u16();
    let text = resp.text().await.unwrap_or_default();
    (status, serde_json::from_str(&text).unwrap_or(Value::Null))
}

pub async fn run_example() -> kse::Result<Vec<(String, u16)>> {
    let dir = std::env::temp_dir().join(format!("kse-serve-example-{}", std::process::id()));
    sample::snapshot(&TextPipeline::builtin())?.persist(&dir)?;
    let cfg = ServiceConfig {
        index: dir.clone(),
        ..ServiceConfig::default()
    };
    let state = AppState::new(&cfg)?.with_clock(Arc::new(|| sample::SAMPLE_NOW));
    let app = router(Arc::new(state), cfg.max_body_bytes, None);

    let listener = tokio::net::TcpListener::bind("127.0.0.1:0")
        .await
        .map_err(|e| kse::Error::Config(e.to_string()))?;
    let base = format!("http://{}", listener.local_addr().expect("bound"));
    let server = tokio::spawn(async move { axum::serve(listener, app).await });

    let c = reqwest::Client::new();
    let mut seen = Vec::new();

    let (s, health) = call(c.get(format!("{base}/health"))).await;
    println!("GET /health -> {s} {health}");
    seen.push(("health".into(), s));

    let (s, found) = call(c.get(format!("{base}/search?q=temples%20in%20Phnom%20Penh&explain=1"))).await;
    println!("GET /search -> {s}");
    for r in found["results"].as_array().into_iter().flatten() {
        println!("   {:.4}  {}", r["total"].as_f64().unwrap_or(0.0), r["title"]);
    }
    seen.push(("search".into(), s));

    let doc_id = found["results"][0]["doc_id"].as_str().unwrap_or_default().to_string();
    let click = json!({ "doc_id": doc_id, "query": "temples in Phnom Penh", "event": "click" });
    let (s, _) = call(with_json(c.post(format!("{base}/feedback")), &click)).await;
    println!("POST /feedback (click) -> {s}");
    seen.push(("feedback".into(), s));

    let doc = json!({ "title": "Psar Thmei at night", "body": "The Central Market dome glows after dark." });
    let (s, added) = call(with_json(c.post(format!("{base}/documents")), &doc)).await;
    println!("POST /documents -> {s} {}", added["doc_id"]);
    seen.push(("add".into(), s));

    let (s, got) = call(c.get(format!("{base}/documents/{doc_id}"))).await;
    println!("GET /documents/{{id}} -> {s} popularity={}", got["popularity"]);
    seen.push(("get".into(), s));

    server.abort();
    let _ = std::fs::remove_dir_all(&dir);
    Ok(seen)
}

#[tokio::main]
async fn main() -> kse::Result<()> {
    run_example().await.map(|_| ())
}
