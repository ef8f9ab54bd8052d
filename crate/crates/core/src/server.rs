//! JSON HTTP API for game sessions.
//!
//! When the human plays Splitter the engine opens as Connector at creation
//! and answers every Splitter move, so a session is always waiting on the
//! human until it finishes.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex, TryLockError};
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::graph::{Graph, GraphJson, Radius, Vertex};
use crate::play::{Game, GameConfig, PlayError, Role, StateJson, DEFAULT_ANALYSIS_LIMIT};
use crate::rank::{EngineError, DEFAULT_VERTEX_LIMIT};

#[derive(Clone, Debug)]
pub struct ServerConfig {
    pub idle_timeout: Duration,
    pub analysis_limit: usize,
    pub vertex_limit: usize,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            idle_timeout: Duration::from_secs(30 * 60),
            analysis_limit: DEFAULT_ANALYSIS_LIMIT,
            vertex_limit: DEFAULT_VERTEX_LIMIT,
        }
    }
}

#[derive(Debug)]
struct Session {
    game: Game,
    last_used: Instant,
}

type Slot = Arc<Mutex<Session>>;

#[derive(Clone)]
pub struct AppState {
    config: Arc<ServerConfig>,
    sessions: Arc<Mutex<HashMap<String, Slot>>>,
}

impl AppState {
    pub fn new(config: ServerConfig) -> Self {
        AppState {
            config: Arc::new(config),
            sessions: Arc::default(),
        }
    }

    pub fn session_count(&self) -> usize {
        self.sessions.lock().unwrap().len()
    }

    fn slot(&self, id: &str) -> Result<Slot, ApiError> {
        self.sessions
            .lock()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("unknown game {id}")))
    }

    /// Drops sessions idle for longer than the timeout; busy ones are kept.
    pub fn sweep(&self, now: Instant) -> usize {
        let timeout = self.config.idle_timeout;
        let mut sessions = self.sessions.lock().unwrap();
        let before = sessions.len();
        sessions.retain(|_, slot| match slot.try_lock() {
            Ok(s) => now.saturating_duration_since(s.last_used) <= timeout,
            Err(_) => true,
        });
        before - sessions.len()
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, message)
    }
}

impl From<PlayError> for ApiError {
    fn from(e: PlayError) -> Self {
        let status = match &e {
            PlayError::IllegalVertex(_) => StatusCode::BAD_REQUEST,
            PlayError::EmptyGraph | PlayError::Engine(EngineError::TooLarge { .. }) => StatusCode::BAD_REQUEST,
            PlayError::Finished | PlayError::WrongPhase(_) | PlayError::NotEngineTurn | PlayError::NotHumanTurn => {
                StatusCode::CONFLICT
            }
            PlayError::AnalysisDisabled => StatusCode::UNPROCESSABLE_ENTITY,
            PlayError::Engine(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError::new(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateRequest {
    graph: GraphJson,
    radius: u64,
    human_role: Role,
    #[serde(default = "yes")]
    analysis: bool,
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MoveRequest {
    vertex: Vertex,
}

#[derive(Deserialize)]
struct WhatIfQuery {
    vertex: Vertex,
}

#[derive(Serialize)]
struct CreateResponse {
    game_id: String,
    state: StateJson,
}

#[derive(Serialize)]
struct StateResponse {
    state: StateJson,
}

#[derive(Serialize)]
struct MoveResponse {
    state: StateJson,
    engine_reply: Option<Vertex>,
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid request body: {e}")))
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
}

async fn create_game(State(app): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: CreateRequest = parse_body(&body)?;
    let graph = Graph::try_from(req.graph).map_err(|e| ApiError::bad_request(e.to_string()))?;
    let radius = Radius::try_from(req.radius).map_err(|e| ApiError::bad_request(e.to_string()))?;
    let mut config = GameConfig::new(Arc::new(graph), radius, req.human_role);
    config.analysis = req.analysis;
    config.analysis_limit = app.config.analysis_limit;
    config.vertex_limit = app.config.vertex_limit;

    let game = blocking(move || {
        let mut game = Game::new(config)?;
        game.play_engine()?;
        Ok(game)
    })
    .await?;
    let state = game.state_json();
    let id = uuid::Uuid::new_v4().simple().to_string();
    let session = Session {
        game,
        last_used: Instant::now(),
    };
    app.sessions
        .lock()
        .unwrap()
        .insert(id.clone(), Arc::new(Mutex::new(session)));
    tracing::debug!(game_id = %id, "created game");
    Ok((StatusCode::CREATED, Json(CreateResponse { game_id: id, state })).into_response())
}

async fn get_game(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<StateResponse>, ApiError> {
    let slot = app.slot(&id)?;
    let mut s = lock_session(&slot)?;
    s.last_used = Instant::now();
    Ok(Json(StateResponse {
        state: s.game.state_json(),
    }))
}

fn lock_session(slot: &Slot) -> Result<std::sync::MutexGuard<'_, Session>, ApiError> {
    match slot.try_lock() {
        Ok(s) => Ok(s),
        Err(TryLockError::WouldBlock) => Err(ApiError::new(StatusCode::CONFLICT, "a move is in flight")),
        Err(TryLockError::Poisoned(p)) => Ok(p.into_inner()),
    }
}

async fn make_move(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<MoveResponse>, ApiError> {
    let req: MoveRequest = parse_body(&body)?;
    let slot = app.slot(&id)?;
    blocking(move || {
        let mut s = lock_session(&slot)?;
        s.last_used = Instant::now();
        s.game.human_move(req.vertex)?;
        let engine_reply = s.game.play_engine()?;
        Ok(Json(MoveResponse {
            state: s.game.state_json(),
            engine_reply,
        }))
    })
    .await
}

async fn what_if(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<WhatIfQuery>,
) -> Result<Response, ApiError> {
    let slot = app.slot(&id)?;
    blocking(move || {
        let mut s = lock_session(&slot)?;
        s.last_used = Instant::now();
        let w = s.game.what_if(q.vertex)?;
        Ok(Json(w).into_response())
    })
    .await
}

async fn delete_game(State(app): State<AppState>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    match app.sessions.lock().unwrap().remove(&id) {
        Some(_) => Ok(StatusCode::NO_CONTENT),
        None => Err(ApiError::new(StatusCode::NOT_FOUND, format!("unknown game {id}"))),
    }
}

pub fn router(app: AppState) -> Router {
    Router::new()
        .route("/api/games", post(create_game))
        .route("/api/games/{id}", get(get_game).delete(delete_game))
        .route("/api/games/{id}/move", post(make_move))
        .route("/api/games/{id}/whatif", get(what_if))
        .with_state(app)
}

/// Serves the API on `addr` until the process is stopped.
pub async fn serve(addr: SocketAddr, config: ServerConfig) -> std::io::Result<()> {
    let app = AppState::new(config);
    let sweeper = app.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            let dropped = sweeper.sweep(Instant::now());
            if dropped > 0 {
                tracing::info!(dropped, "expired idle sessions");
            }
        }
    });
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(app)).await
}
