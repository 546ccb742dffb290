//! HTTP + JSON review API over a [`Registry`].
//!
//! | method | path | body | success |
//! |---|---|---|---|
//! | GET | `/collections` | | 200, latest record of each collection |
//! | GET | `/collections/{id}/buckets?dimension=D[&edges=a,b,c]` | | 200, bucket report |
//! | GET | `/collections/{id}/thresholds` | | 200, current config (version 0 if never saved) |
//! | PUT | `/collections/{id}/thresholds` | config with version = current + 1 | 200 |
//! | GET | `/domains/queue` | | 200, verification queue |
//! | POST | `/domains/{domain}/verdict` | `{"status", "note", "reviewer"?}` | 201, ledger entry |
//! | GET | `/allowlist` | | 200, JSONL allowlist |
//!
//! Unknown collections and domains give 404, stale versions and already
//! decided domains give 409, malformed input gives 400. Errors carry a
//! `{"error": "..."}` body. When a token is configured, PUT and POST need
//! `Authorization: Bearer <token>`.

use std::sync::{Arc, Mutex, MutexGuard};

use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;

use super::Registry;
use crate::curate::ThresholdConfig;
use crate::error::Error;
use crate::policy::DomainStatus;

#[derive(Clone)]
struct AppState {
    registry: Arc<Mutex<Registry>>,
    token: Option<Arc<str>>,
}

impl AppState {
    fn lock(&self) -> MutexGuard<'_, Registry> {
        self.registry.lock().unwrap_or_else(|p| p.into_inner())
    }

    fn authorize(&self, headers: &HeaderMap) -> Result<(), ApiError> {
        let Some(token) = &self.token else { return Ok(()) };
        let given = headers
            .get(header::AUTHORIZATION)
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.strip_prefix("Bearer "));
        if given == Some(&**token) {
            Ok(())
        } else {
            Err(ApiError(StatusCode::UNAUTHORIZED, "missing or wrong bearer token".into()))
        }
    }
}

struct ApiError(StatusCode, String);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::NotFound(_) => StatusCode::NOT_FOUND,
            Error::Conflict(_) => StatusCode::CONFLICT,
            Error::Config(_) | Error::UnknownDimension(_) | Error::NonMonotoneEdges | Error::InvalidDocument { .. } => {
                StatusCode::BAD_REQUEST
            }
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

/// Router over a shared registry. With `token`, mutating requests must carry it.
pub fn router(registry: Arc<Mutex<Registry>>, token: Option<String>) -> Router {
    let state = AppState { registry, token: token.map(Arc::from) };
    Router::new()
        .route("/collections", get(list_collections))
        .route("/collections/:id/buckets", get(buckets))
        .route("/collections/:id/thresholds", get(get_thresholds).put(put_thresholds))
        .route("/domains/queue", get(queue))
        .route("/domains/:domain/verdict", post(verdict))
        .route("/allowlist", get(allowlist))
        .with_state(state)
}

async fn list_collections(State(s): State<AppState>) -> Response {
    let reg = s.lock();
    Json(reg.collections()).into_response()
}

#[derive(Deserialize)]
struct BucketQuery {
    dimension: String,
    edges: Option<String>,
}

async fn buckets(State(s): State<AppState>, Path(id): Path<String>, Query(q): Query<BucketQuery>) -> ApiResult<Response> {
    let edges = match q.edges.as_deref().filter(|e| !e.trim().is_empty()) {
        Some(raw) => Some(
            raw.split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| ApiError(StatusCode::BAD_REQUEST, format!("bad edges: {e}")))?,
        ),
        None => None,
    };
    let reg = s.lock();
    let report = reg.buckets(&id, &q.dimension, edges.as_deref())?;
    Ok(Json(report).into_response())
}

async fn get_thresholds(State(s): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let reg = s.lock();
    Ok(Json(reg.thresholds(&id)?).into_response())
}

async fn put_thresholds(
    State(s): State<AppState>,
    Path(id): Path<String>,
    headers: HeaderMap,
    Json(config): Json<ThresholdConfig>,
) -> ApiResult<Response> {
    s.authorize(&headers)?;
    if config.collection_id != id {
        return Err(ApiError(
            StatusCode::BAD_REQUEST,
            format!("body is for collection `{}`, path names `{id}`", config.collection_id),
        ));
    }
    let mut reg = s.lock();
    let stored = reg.put_thresholds(config)?;
    Ok(Json(stored).into_response())
}

async fn queue(State(s): State<AppState>) -> Response {
    let reg = s.lock();
    Json(reg.queue()).into_response()
}

#[derive(Deserialize)]
struct VerdictBody {
    status: DomainStatus,
    #[serde(default)]
    note: String,
    #[serde(default)]
    reviewer: String,
}

async fn verdict(
    State(s): State<AppState>,
    Path(domain): Path<String>,
    headers: HeaderMap,
    Json(body): Json<VerdictBody>,
) -> ApiResult<Response> {
    s.authorize(&headers)?;
    let mut reg = s.lock();
    let entry = reg.record_verdict(&domain, body.status, &body.note, &body.reviewer)?;
    Ok((StatusCode::CREATED, Json(entry)).into_response())
}

async fn allowlist(State(s): State<AppState>) -> Response {
    let reg = s.lock();
    ([(header::CONTENT_TYPE, "application/x-ndjson")], reg.export_allowlist()).into_response()
}
