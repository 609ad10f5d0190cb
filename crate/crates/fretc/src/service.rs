//! Local HTTP API over one project. Writes are serialized behind a lock and
//! guarded by an optimistic revision check (`If-Match`).

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use fretish_core::{
    classify_template, eval_template_direct, formalize_ft, formalize_pt, lint_project,
    parse_requirement, render_diagram, validate_project, FretishAst, ParseError, Project,
    RefinementError, DEFAULT_BUDGET,
};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use tokio::sync::RwLock;

use crate::formats::{finding_json, verdict_json, MappingFile, TraceFile};
use crate::store::{self, RequirementFile};

#[derive(Debug)]
struct Stored {
    project: Project,
    revision: u64,
    path: Option<PathBuf>,
}

/// Shared service state. With a path, every accepted write is saved to it.
#[derive(Debug, Clone)]
pub struct AppState {
    inner: Arc<RwLock<Stored>>,
}

impl AppState {
    pub fn new(project: Project, path: Option<PathBuf>) -> Self {
        AppState {
            inner: Arc::new(RwLock::new(Stored {
                project,
                revision: 1,
                path,
            })),
        }
    }
}

#[derive(Debug)]
pub enum ApiError {
    BadRequest(String),
    NotFound(String),
    Conflict { current: u64 },
    Unparsable(ParseError),
    Unprocessable(String),
    Internal(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, json!({ "error": m })),
            ApiError::NotFound(m) => (StatusCode::NOT_FOUND, json!({ "error": m })),
            ApiError::Conflict { current } => (
                StatusCode::CONFLICT,
                json!({ "error": "stale revision; reload the project", "revision": current }),
            ),
            ApiError::Unparsable(e) => (
                StatusCode::UNPROCESSABLE_ENTITY,
                json!({ "error": { "offset": e.offset, "expected": e.expected, "found": e.found } }),
            ),
            ApiError::Unprocessable(m) => (StatusCode::UNPROCESSABLE_ENTITY, json!({ "error": m })),
            ApiError::Internal(m) => (StatusCode::INTERNAL_SERVER_ERROR, json!({ "error": m })),
        };
        (status, Json(body)).into_response()
    }
}

type ApiResult = Result<Response, ApiError>;

fn body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(bytes).map_err(|e| ApiError::BadRequest(format!("malformed body: {e}")))
}

fn parse(text: &str) -> Result<FretishAst, ApiError> {
    parse_requirement(text).map_err(ApiError::Unparsable)
}

fn etag(revision: u64) -> HeaderValue {
    HeaderValue::from_str(&format!("\"{revision}\"")).expect("digits are a valid header")
}

/// Fails when an `If-Match` header names a revision other than `current`.
fn check_revision(headers: &HeaderMap, current: u64) -> Result<(), ApiError> {
    let Some(value) = headers.get(header::IF_MATCH) else {
        return Ok(());
    };
    let text = value
        .to_str()
        .map_err(|_| ApiError::BadRequest("unreadable If-Match".into()))?;
    let wanted: u64 = text
        .trim()
        .trim_matches('"')
        .parse()
        .map_err(|_| ApiError::BadRequest(format!("If-Match `{text}` is not a revision")))?;
    if wanted == current {
        Ok(())
    } else {
        Err(ApiError::Conflict { current })
    }
}

fn with_revision(revision: u64, body: Value) -> Response {
    let mut r = Json(body).into_response();
    r.headers_mut().insert(header::ETAG, etag(revision));
    r
}

fn persist(stored: &Stored, project: &Project) -> Result<(), ApiError> {
    match &stored.path {
        Some(path) => {
            store::save_project(project, path).map_err(|e| ApiError::Internal(e.to_string()))
        }
        None => Ok(()),
    }
}

async fn get_project(State(state): State<AppState>) -> Response {
    let stored = state.inner.read().await;
    let mut r = (
        [(
            header::CONTENT_TYPE,
            HeaderValue::from_static("application/json"),
        )],
        store::project_to_string(&stored.project),
    )
        .into_response();
    r.headers_mut().insert(header::ETAG, etag(stored.revision));
    r
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Upsert {
    text: String,
    #[serde(default)]
    rationale: String,
    #[serde(default)]
    comments: String,
    #[serde(default)]
    parents: Vec<String>,
}

async fn put_requirement(
    State(state): State<AppState>,
    Path(id): Path<String>,
    headers: HeaderMap,
    bytes: Bytes,
) -> ApiResult {
    let upsert: Upsert = body(&bytes)?;
    parse(&upsert.text)?;
    let file = RequirementFile {
        comments: upsert.comments,
        id: id.clone(),
        parents: upsert.parents,
        rationale: upsert.rationale,
        text: upsert.text,
    };
    let record = file
        .clone()
        .into_record("")
        .map_err(|e| ApiError::BadRequest(e.to_string()))?;

    let mut stored = state.inner.write().await;
    check_revision(&headers, stored.revision)?;
    let mut project = stored.project.clone();
    match project.requirement_mut(&id) {
        Some(existing) => *existing = record,
        None => project.requirements.push(record),
    }
    let problems: Vec<String> = validate_project(&project)
        .into_iter()
        .filter(|v| v.requirement.as_str() == id)
        .map(|v| v.to_string())
        .collect();
    if !problems.is_empty() {
        return Err(ApiError::BadRequest(problems.join("; ")));
    }
    persist(&stored, &project)?;
    stored.project = project;
    stored.revision += 1;
    Ok(with_revision(
        stored.revision,
        json!({ "revision": stored.revision, "requirement": file }),
    ))
}

async fn delete_requirement(
    State(state): State<AppState>,
    Path(id): Path<String>,
    headers: HeaderMap,
) -> ApiResult {
    let mut stored = state.inner.write().await;
    if stored.project.requirement(&id).is_none() {
        return Err(ApiError::NotFound(format!("unknown requirement `{id}`")));
    }
    check_revision(&headers, stored.revision)?;
    if let Some(child) = stored.project.children_of(&id).next() {
        return Err(ApiError::BadRequest(format!(
            "`{}` still names `{id}` as a parent",
            child.id
        )));
    }
    let mut project = stored.project.clone();
    project.requirements.retain(|r| r.id.as_str() != id);
    persist(&stored, &project)?;
    stored.project = project;
    stored.revision += 1;
    Ok(with_revision(
        stored.revision,
        json!({ "revision": stored.revision }),
    ))
}

#[derive(Debug, Deserialize)]
struct TextBody {
    text: String,
}

async fn post_parse(bytes: Bytes) -> ApiResult {
    let req: TextBody = body(&bytes)?;
    let ast = parse(&req.text)?;
    Ok(Json(json!({ "ast": crate::tree::export_parse_tree(&ast) })).into_response())
}

#[derive(Debug, Deserialize)]
struct FormalizeBody {
    text: String,
    form: String,
}

async fn post_formalize(bytes: Bytes) -> ApiResult {
    let req: FormalizeBody = body(&bytes)?;
    let ast = parse(&req.text)?;
    let template = classify_template(&ast).map_err(|e| ApiError::Unprocessable(e.to_string()))?;
    let formula = match req.form.as_str() {
        "ft" => formalize_ft(&ast),
        "pt" => formalize_pt(&ast),
        other => {
            return Err(ApiError::BadRequest(format!(
                "form `{other}` is neither `ft` nor `pt`"
            )))
        }
    }
    .map_err(|e| ApiError::Unprocessable(e.to_string()))?;
    Ok(
        Json(json!({ "template": template.to_string(), "formula": formula.to_string() }))
            .into_response(),
    )
}

async fn post_diagram(bytes: Bytes) -> ApiResult {
    let req: TextBody = body(&bytes)?;
    let ast = parse(&req.text)?;
    let d = render_diagram(&ast).map_err(|e| ApiError::Unprocessable(e.to_string()))?;
    let template = classify_template(&ast).map_err(|e| ApiError::Unprocessable(e.to_string()))?;
    Ok(Json(json!({
        "template": template.to_string(),
        "mode_label": d.mode_label,
        "trigger_label": d.trigger_label,
        "stop_label": d.stop_label,
        "obligation": d.obligation.as_str(),
        "response_label": d.response_label,
        "ascii": crate::diagram::render_ascii(&d),
        "svg": crate::diagram::render_svg(&d),
    }))
    .into_response())
}

#[derive(Debug, Deserialize)]
struct CheckTraceBody {
    id: String,
    trace: TraceFile,
}

async fn post_check_trace(State(state): State<AppState>, bytes: Bytes) -> ApiResult {
    let req: CheckTraceBody = body(&bytes)?;
    let trace = req.trace.into_trace().map_err(ApiError::BadRequest)?;
    let stored = state.inner.read().await;
    let record = stored
        .project
        .requirement(&req.id)
        .ok_or_else(|| ApiError::NotFound(format!("unknown requirement `{}`", req.id)))?;
    let ast = record.ast().map_err(ApiError::Unparsable)?;
    let holds =
        eval_template_direct(&ast, &trace).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    Ok(Json(json!({ "verdict": if holds { "SAT" } else { "UNSAT" } })).into_response())
}

#[derive(Debug, Deserialize)]
struct RefinementBody {
    mapping: MappingFile,
    bound: usize,
    budget: Option<u64>,
}

async fn post_check_refinement(State(state): State<AppState>, bytes: Bytes) -> ApiResult {
    let req: RefinementBody = body(&bytes)?;
    let mapping = req
        .mapping
        .into_mapping()
        .map_err(|e| ApiError::BadRequest(format!("mapping{}: {}", e.pointer, e.reason)))?;
    let project = state.inner.read().await.project.clone();
    let budget = req.budget.unwrap_or(DEFAULT_BUDGET);
    let verdict = tokio::task::spawn_blocking(move || {
        crate::parallel::check_refinement_parallel(&project, &mapping, req.bound, budget)
    })
    .await
    .map_err(|e| ApiError::Internal(e.to_string()))?
    .map_err(|e| match e {
        RefinementError::UnknownRequirement(_) => ApiError::NotFound(e.to_string()),
        RefinementError::Parse(_, p) => ApiError::Unparsable(p),
        other => ApiError::BadRequest(other.to_string()),
    })?;
    Ok(Json(verdict_json(&verdict)).into_response())
}

async fn get_lint(State(state): State<AppState>) -> Response {
    let stored = state.inner.read().await;
    let findings: Vec<Value> = lint_project(&stored.project)
        .iter()
        .map(finding_json)
        .collect();
    Json(Value::Array(findings)).into_response()
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/project", get(get_project))
        .route(
            "/requirements/{id}",
            put(put_requirement).delete(delete_requirement),
        )
        .route("/parse", post(post_parse))
        .route("/formalize", post(post_formalize))
        .route("/diagram", post(post_diagram))
        .route("/check-trace", post(post_check_trace))
        .route("/check-refinement", post(post_check_refinement))
        .route("/lint", get(get_lint))
        .with_state(state)
}

/// Serves on `127.0.0.1:port` until the process ends.
pub async fn serve(state: AppState, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}
