//! The `kse` command line.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::eval::{eval_keywords, eval_ranking, load_ground_truth};
use crate::index::{extract_article, read_corpus, Document, IndexSnapshot, Indexer, MANIFEST_FILE};
use crate::keywords::{extract_keywords, DEFAULT_K_BODY, DEFAULT_K_TITLE};
use crate::ontology::{expand_query, load_ontology};
use crate::ranking::{search, RankingMode, SearchOutcome};
use crate::service::{fetch_page, serve, system_clock, ServiceConfig};

#[derive(Debug, Parser)]
#[command(name = "kse", version, about = "Khmer semantic search engine")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// JSON config file; KSE_* environment variables override it.
    #[arg(long, global = true, env = "KSE_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub lexicon: Option<PathBuf>,
    #[arg(long, global = true)]
    pub stoplist: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the HTTP service.
    Serve(ServeArgs),
    /// Build or extend an index.
    #[command(subcommand)]
    Index(IndexCommand),
    /// Rank indexed documents for a query.
    Search(SearchArgs),
    /// Extract title and body keywords from one document.
    Extract(ExtractArgs),
    /// Precision / recall / F1 against ground truth.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Inspect an ontology.
    #[command(subcommand)]
    Ontology(OntologyCommand),
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub bind: Option<String>,
    #[arg(long)]
    pub index: Option<PathBuf>,
    #[arg(long)]
    pub ontology: Option<PathBuf>,
    #[arg(long)]
    pub static_dir: Option<PathBuf>,
    /// Batch added documents until POST /reindex.
    #[arg(long)]
    pub defer_reindex: bool,
}

#[derive(Debug, Subcommand)]
pub enum IndexCommand {
    /// Index a JSONL corpus ({title, body, url?, popularity?, ingested_at?} per line).
    Build {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fetch a page, extract title and body, add it to the index.
    AddUrl {
        url: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Like add-url, from an HTML file already on disk.
    AddHtml {
        file: PathBuf,
        #[arg(long)]
        url: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub index: Option<PathBuf>,
    #[arg(long)]
    pub ontology: Option<PathBuf>,
    /// Keyword-only search.
    #[arg(long)]
    pub no_ontology: bool,
    #[arg(long = "q")]
    pub query: String,
    #[arg(long, default_value = "weighted")]
    pub ranking: String,
    #[arg(long)]
    pub top: Option<usize>,
    /// Print the full score breakdown per result.
    #[arg(long)]
    pub explain: bool,
    #[arg(long)]
    pub json: bool,
    /// Evaluation time in Unix seconds (defaults to the clock).
    #[arg(long)]
    pub now: Option<i64>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Document file: JSON {title, body}, HTML, or plain text whose first
    /// line is the title.
    #[arg(long)]
    pub doc: PathBuf,
    /// Index providing corpus statistics.
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, default_value_t = DEFAULT_K_TITLE)]
    pub k_title: usize,
    #[arg(long, default_value_t = DEFAULT_K_BODY)]
    pub k_body: usize,
}

#[derive(Debug, Subcommand)]
pub enum EvalCommand {
    Keywords {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long, default_value_t = DEFAULT_K_TITLE)]
        k_title: usize,
        #[arg(long, default_value_t = DEFAULT_K_BODY)]
        k_body: usize,
        #[arg(long)]
        json: bool,
    },
    Ranking {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        ontology: Option<PathBuf>,
        #[arg(long)]
        no_ontology: bool,
        #[arg(long)]
        truth: PathBuf,
        /// Only these queries (default: every query in the truth file).
        #[arg(long = "query")]
        queries: Vec<String>,
        #[arg(long)]
        now: Option<i64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum OntologyCommand {
    Validate { path: PathBuf },
    Expand {
        #[arg(long)]
        query: String,
        #[arg(long)]
        ontology: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

fn base_config(global: &GlobalOpts) -> Result<ServiceConfig> {
    let mut cfg = ServiceConfig::load(global.config.as_deref())?;
    if let Some(p) = &global.lexicon {
        cfg.lexicon = Some(p.clone());
    }
    if let Some(p) = &global.stoplist {
        cfg.stoplist = Some(p.clone());
    }
    Ok(cfg)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::io("stdout", e))
}

fn emit_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    emit(out, &s)
}

fn runtime() -> Result<tokio::runtime::Runtime> {
    tokio::runtime::Runtime::new().map_err(|e| Error::io("tokio runtime", e))
}

/// Staged documents of an existing index, or an empty indexer.
fn open_indexer(cfg: &ServiceConfig, dir: &Path) -> Result<Indexer> {
    let pipeline = cfg.pipeline()?;
    if dir.join(MANIFEST_FILE).exists() {
        Ok(Indexer::from_snapshot(pipeline, &IndexSnapshot::load(dir)?))
    } else {
        Ok(Indexer::new(pipeline))
    }
}

fn add_page(cfg: &ServiceConfig, out_dir: &Path, html: &str, url: Option<String>, out: &mut dyn Write) -> Result<()> {
    let (title, body) = extract_article(html)?;
    let mut ix = open_indexer(cfg, out_dir)?;
    let (id, created) = ix.add(&title, &body, url, (system_clock())())?;
    ix.build_snapshot().persist(out_dir)?;
    emit_json(
        out,
        &serde_json::json!({ "doc_id": id, "created": created, "title": title, "body": body }),
    )
}

/// Read a standalone document file for `extract`.
fn read_doc_file(path: &Path) -> Result<(String, String)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
    match ext.as_str() {
        "json" => {
            #[derive(serde::Deserialize)]
            struct Doc {
                title: String,
                body: String,
            }
            let d: Doc = serde_json::from_str(&text)?;
            Ok((d.title, d.body))
        }
        "html" | "htm" => extract_article(&text),
        _ => {
            let (title, body) = text.split_once('\n').unwrap_or((&text, ""));
            Ok((title.trim().to_string(), body.trim().to_string()))
        }
    }
}

/// Plain-text rendering of search results.
pub fn format_results(outcome: &SearchOutcome, snapshot: &IndexSnapshot, explain: bool) -> String {
    let mut s = String::new();
    let terms: Vec<String> = outcome
        .expanded
        .terms()
        .map(|(t, w)| format!("{t}({w})"))
        .collect();
    let _ = writeln!(s, "query: {}  [{} mode]", outcome.query, outcome.mode);
    let _ = writeln!(s, "terms: {}", terms.join(" "));
    if outcome.results.is_empty() {
        let _ = writeln!(s, "no matches");
        return s;
    }
    for (i, r) in outcome.results.iter().enumerate() {
        let title = snapshot.document(&r.doc_id).map(|d| d.title.as_str()).unwrap_or("");
        let _ = writeln!(s, "{:>2}. {:.4}  {}  {}", i + 1, r.total, r.doc_id, title);
        let _ = writeln!(s, "    {}", r.snippet);
        if explain {
            let b = &r.breakdown;
            let _ = writeln!(
                s,
                "    title={:.4} body={:.4} keyword={:.4} semantic={:.4} relevance={:.4} popularity={:.4} recency={:.4} total={:.4}",
                b.score_title, b.score_body, b.keyword_score, b.semantic_score, b.relevance, b.popularity, b.recency_factor, b.total
            );
            if let Some(n) = b.normal_rank {
                let _ = writeln!(s, "    normal_rank={n:.2}");
            }
        }
    }
    s
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let mut cfg = base_config(&cli.global)?;
    match cli.command {
        Command::Serve(a) => {
            if let Some(b) = a.bind {
                cfg.bind = b;
            }
            if let Some(p) = a.index {
                cfg.index = p;
            }
            if let Some(p) = a.ontology {
                cfg.ontology = Some(p);
            }
            if let Some(p) = a.static_dir {
                cfg.static_dir = Some(p);
            }
            cfg.defer_reindex |= a.defer_reindex;
            runtime()?.block_on(serve(cfg))
        }
        Command::Index(IndexCommand::Build { corpus, out: dir }) => {
            let records = read_corpus(&corpus)?;
            let now = (system_clock())();
            let mut ix = Indexer::new(cfg.pipeline()?);
            for rec in records {
                ix.add_record(rec, now)?;
            }
            let snap = ix.build_snapshot();
            snap.persist(&dir)?;
            emit(
                out,
                &format!(
                    "indexed {} documents, {} terms into {}\n",
                    snap.doc_count(),
                    snap.postings().len(),
                    dir.display()
                ),
            )
        }
        Command::Index(IndexCommand::AddUrl { url, out: dir }) => {
            let html = runtime()?.block_on(fetch_page(&reqwest::Client::new(), &url))?;
            add_page(&cfg, &dir, &html, Some(url), out)
        }
        Command::Index(IndexCommand::AddHtml { file, url, out: dir }) => {
            let html = std::fs::read_to_string(&file).map_err(|e| Error::io(&file, e))?;
            add_page(&cfg, &dir, &html, url, out)
        }
        Command::Search(a) => {
            let dir = a.index.unwrap_or(cfg.index.clone());
            if let Some(p) = a.ontology {
                cfg.ontology = Some(p);
            }
            cfg.no_ontology |= a.no_ontology;
            if let Some(top) = a.top {
                cfg.ranking.top_n = top;
            }
            let mode: RankingMode = a.ranking.parse()?;
            let snapshot = IndexSnapshot::load(&dir)?;
            let pipeline = cfg.pipeline()?;
            let ontology = cfg.load_ontology()?;
            let now = a.now.unwrap_or_else(|| (system_clock())());
            let outcome = search(&a.query, mode, &pipeline, &snapshot, ontology.as_ref(), &cfg.ranking, now)?;
            if a.json {
                emit_json(out, &outcome)
            } else {
                emit(out, &format_results(&outcome, &snapshot, a.explain))
            }
        }
        Command::Extract(a) => {
            let snapshot = IndexSnapshot::load(&a.corpus)?;
            let (title, body) = read_doc_file(&a.doc)?;
            let doc = Document::new(&cfg.pipeline()?, &title, &body, None, 0)?;
            let ks = extract_keywords(&doc, snapshot.stats(), a.k_title, a.k_body)?;
            emit_json(out, &ks)
        }
        Command::Eval(EvalCommand::Keywords { index, truth, k_title, k_body, json }) => {
            let snapshot = IndexSnapshot::load(&index)?;
            let truth = load_ground_truth(&truth, &snapshot)?;
            let report = eval_keywords(&snapshot, &truth, k_title, k_body)?;
            if json {
                emit_json(out, &report)
            } else {
                emit(out, &report.to_table())
            }
        }
        Command::Eval(EvalCommand::Ranking { index, ontology, no_ontology, truth, queries, now, json }) => {
            if let Some(p) = ontology {
                cfg.ontology = Some(p);
            }
            cfg.no_ontology |= no_ontology;
            let snapshot = IndexSnapshot::load(&index)?;
            let truth = load_ground_truth(&truth, &snapshot)?;
            let ont = cfg.load_ontology()?;
            let now = now.unwrap_or_else(|| (system_clock())());
            let res = eval_ranking(&queries, &cfg.pipeline()?, &snapshot, ont.as_ref(), &cfg.ranking, &truth, now)?;
            if json {
                return emit_json(out, &res);
            }
            let mut text = res.report.to_table("Query");
            for q in &res.skipped {
                let _ = writeln!(text, "skipped (no ground truth): {q}");
            }
            emit(out, &text)
        }
        Command::Ontology(OntologyCommand::Validate { path }) => {
            let ont = load_ontology(&path)?;
            let depth = ont.entities().filter_map(|e| ont.depth(&e.id).ok()).max().unwrap_or(0);
            emit(
                out,
                &format!(
                    "ok: {} entities, {} relations, root `{}`, max depth {depth}\n",
                    ont.len(),
                    ont.relations().len(),
                    ont.root()
                ),
            )
        }
        Command::Ontology(OntologyCommand::Expand { query, ontology, json }) => {
            if let Some(p) = ontology {
                cfg.ontology = Some(p);
            }
            cfg.no_ontology = false;
            let ont = cfg.load_ontology()?.expect("expansion enabled");
            let ts = cfg.pipeline()?.tokenize_query(&query);
            if ts.is_empty() {
                return Err(Error::EmptyQuery);
            }
            let eq = expand_query(&ts, &ont, &cfg.ranking.expansion);
            if json {
                return emit_json(out, &eq);
            }
            let mut text = String::new();
            for t in &eq.original_terms {
                let _ = writeln!(text, "{:<24} {:.2}  query", t.term, t.weight);
            }
            for t in &eq.expansion_terms {
                let _ = writeln!(text, "{:<24} {:.2}  {} via {}", t.term, t.weight, t.relation, t.entity);
            }
            emit(out, &text)
        }
    }
}

/// Entry point for the binary: parse, run, print errors to stderr.
pub fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kse: {e}");
            std::process::ExitCode::FAILURE
        }
    }
}
