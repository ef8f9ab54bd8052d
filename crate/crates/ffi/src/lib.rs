//! C interface to the splitter-game solver.
//!
//! Every fallible function returns a [`SplitterStatus`]; on failure the
//! message is available from [`splitter_last_error`] on the same thread.
//! Strings returned through `char **` must be released with
//! [`splitter_string_free`], handles with their matching `*_free`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use splitter_core::bounds::BoundTable;
use splitter_core::generators::{generate, Family};
use splitter_core::graph::{Graph, GraphError, Radius};
use splitter_core::play::{Game, GameConfig, PlayError, Role};
use splitter_core::rank::{Engine, EngineConfig, EngineError, DEFAULT_VERTEX_LIMIT};
use splitter_core::witness::{extract_witness, WitnessError};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitterStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    TooLarge = 4,
    IllegalMove = 5,
    WrongPhase = 6,
    AnalysisDisabled = 7,
    BufferTooSmall = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitterRole {
    Connector = 0,
    Splitter = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SplitterEngineOptions {
    pub dominance_pruning: bool,
    pub sandwich_exit: bool,
    pub component_split: bool,
    pub vertex_limit: usize,
}

/// Immutable graph.
pub struct SplitterGraph(Arc<Graph>);

/// Solver bound to one graph and radius; keeps its memo between calls.
pub struct SplitterEngine(Engine);

/// Game session against the engine.
pub struct SplitterGame(Game);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(SplitterStatus, String);

impl Failure {
    fn new(status: SplitterStatus, message: impl Into<String>) -> Self {
        Failure(status, message.into())
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        let status = match e {
            GraphError::InvalidRadius(_) => SplitterStatus::InvalidArgument,
            _ => SplitterStatus::ParseError,
        };
        Failure(status, e.to_string())
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        let status = match e {
            EngineError::TooLarge { .. } => SplitterStatus::TooLarge,
            EngineError::EmptyArena => SplitterStatus::InvalidArgument,
            EngineError::Graph(_) => SplitterStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<WitnessError> for Failure {
    fn from(e: WitnessError) -> Self {
        match e {
            WitnessError::Engine(e) => e.into(),
            other => Failure(SplitterStatus::Internal, other.to_string()),
        }
    }
}

impl From<PlayError> for Failure {
    fn from(e: PlayError) -> Self {
        let status = match &e {
            PlayError::EmptyGraph => SplitterStatus::InvalidArgument,
            PlayError::IllegalVertex(_) => SplitterStatus::IllegalMove,
            PlayError::Finished | PlayError::WrongPhase(_) | PlayError::NotEngineTurn | PlayError::NotHumanTurn => {
                SplitterStatus::WrongPhase
            }
            PlayError::AnalysisDisabled => SplitterStatus::AnalysisDisabled,
            PlayError::Engine(EngineError::TooLarge { .. }) => SplitterStatus::TooLarge,
            PlayError::Engine(_) => SplitterStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

/// Runs `f`, records any failure or panic, and returns its status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SplitterStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            SplitterStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            SplitterStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(SplitterStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(SplitterStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(SplitterStatus::NullPointer, format!("{what} is null")))
}

unsafe fn mut_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure::new(SplitterStatus::NullPointer, format!("{what} is null")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(SplitterStatus::NullPointer, "output pointer is null"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure::new(SplitterStatus::Internal, e.to_string()))?;
    write_out(out, c.into_raw())
}

unsafe fn write_graph(out: *mut *mut SplitterGraph, g: Graph) -> Result<(), Failure> {
    write_out(out, Box::into_raw(Box::new(SplitterGraph(Arc::new(g)))))
}

fn radius(r: u32) -> Result<Radius, Failure> {
    Ok(Radius::new(r)?)
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn splitter_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

#[no_mangle]
pub unsafe extern "C" fn splitter_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an edge list: optional `#` comments, an `n m` header, then `m`
/// lines `u v`.
#[no_mangle]
pub unsafe extern "C" fn splitter_graph_from_edge_list(
    text: *const c_char,
    out: *mut *mut SplitterGraph,
) -> SplitterStatus {
    guard(|| {
        let g = Graph::parse_edge_list(str_arg(text, "text")?)?;
        write_graph(out, g)
    })
}

/// Parses `{"n": .., "edges": [[u, v], ..]}`.
#[no_mangle]
pub unsafe extern "C" fn splitter_graph_from_json(text: *const c_char, out: *mut *mut SplitterGraph) -> SplitterStatus {
    guard(|| {
        let g = Graph::from_json(str_arg(text, "text")?)?;
        write_graph(out, g)
    })
}

/// Builds a graph from an inline family spec such as `family=grid,rows=3,cols=4`.
#[no_mangle]
pub unsafe extern "C" fn splitter_graph_generate(
    spec: *const c_char,
    seed: u64,
    out: *mut *mut SplitterGraph,
) -> SplitterStatus {
    guard(|| {
        let bad = |e: splitter_core::generators::GenError| Failure::new(SplitterStatus::InvalidArgument, e.to_string());
        let family = Family::parse_inline(str_arg(spec, "spec")?, Some(seed)).map_err(bad)?;
        let g = generate(&family).map_err(bad)?;
        write_graph(out, g)
    })
}

#[no_mangle]
pub unsafe extern "C" fn splitter_graph_vertex_count(graph: *const SplitterGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.n())
}

#[no_mangle]
pub unsafe extern "C" fn splitter_graph_edge_count(graph: *const SplitterGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.edge_count())
}

#[no_mangle]
pub unsafe extern "C" fn splitter_graph_free(graph: *mut SplitterGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

#[no_mangle]
pub extern "C" fn splitter_engine_options_default() -> SplitterEngineOptions {
    let cfg = EngineConfig::new(Radius::new(1).expect("1 is a valid radius"));
    SplitterEngineOptions {
        dominance_pruning: cfg.dominance_pruning,
        sandwich_exit: cfg.sandwich_exit,
        component_split: cfg.component_split,
        vertex_limit: DEFAULT_VERTEX_LIMIT,
    }
}

/// `options` may be null for the defaults. The engine keeps its own
/// reference to the graph.
#[no_mangle]
pub unsafe extern "C" fn splitter_engine_new(
    graph: *const SplitterGraph,
    radius_value: u32,
    options: *const SplitterEngineOptions,
    out: *mut *mut SplitterEngine,
) -> SplitterStatus {
    guard(|| {
        let g = ref_arg(graph, "graph")?;
        let opts = options
            .as_ref()
            .copied()
            .unwrap_or_else(|| splitter_engine_options_default());
        let mut cfg = EngineConfig::new(radius(radius_value)?).with_flags(
            opts.dominance_pruning,
            opts.sandwich_exit,
            opts.component_split,
        );
        cfg.vertex_limit = opts.vertex_limit;
        write_out(
            out,
            Box::into_raw(Box::new(SplitterEngine(Engine::new(Arc::clone(&g.0), cfg)))),
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn splitter_engine_free(engine: *mut SplitterEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

#[no_mangle]
pub unsafe extern "C" fn splitter_engine_rank(engine: *mut SplitterEngine, out: *mut usize) -> SplitterStatus {
    guard(|| {
        let e = &mut mut_arg(engine, "engine")?.0;
        let a = e.full_arena();
        let rank = e.splitter_rank(&a)?;
        write_out(out, rank)
    })
}

/// Writes the progressing replies to Connector move `connector` into
/// `buf[0..*len]`. When `cap` is too small, returns `SPLITTER_STATUS_BUFFER_TOO_SMALL` and
/// still stores the needed length in `*len`.
#[no_mangle]
pub unsafe extern "C" fn splitter_engine_progressing(
    engine: *mut SplitterEngine,
    connector: usize,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> SplitterStatus {
    guard(|| {
        let e = &mut mut_arg(engine, "engine")?.0;
        let a = e.full_arena();
        if !a.contains(connector) {
            return Err(Failure::new(
                SplitterStatus::InvalidArgument,
                format!("connector {connector} is not a vertex"),
            ));
        }
        let moves = e.progressing_moves(&a, connector)?.to_vec();
        write_out(len, moves.len())?;
        if moves.len() > cap {
            return Err(Failure::new(
                SplitterStatus::BufferTooSmall,
                format!("{} entries needed", moves.len()),
            ));
        }
        if !moves.is_empty() {
            if buf.is_null() {
                return Err(Failure::new(SplitterStatus::NullPointer, "buffer is null"));
            }
            ptr::copy_nonoverlapping(moves.as_ptr(), buf, moves.len());
        }
        Ok(())
    })
}

/// Full analysis as JSON: rank, optimal Connector moves, and per move the
/// ball, its rank, Splitter's best replies and the progressing set.
#[no_mangle]
pub unsafe extern "C" fn splitter_engine_analysis_json(
    engine: *mut SplitterEngine,
    out: *mut *mut c_char,
) -> SplitterStatus {
    guard(|| {
        let e = &mut mut_arg(engine, "engine")?.0;
        let a = e.full_arena();
        let analysis = e.analyze(&a)?;
        let json =
            serde_json::to_string(&analysis).map_err(|err| Failure::new(SplitterStatus::Internal, err.to_string()))?;
        write_string(out, json)
    })
}

/// Witness certificate JSON: `{"rank", "h", "levels": [...]}`.
#[no_mangle]
pub unsafe extern "C" fn splitter_engine_witness_json(
    engine: *mut SplitterEngine,
    out: *mut *mut c_char,
) -> SplitterStatus {
    guard(|| {
        let e = &mut mut_arg(engine, "engine")?.0;
        let a = e.full_arena();
        let w = extract_witness(e, &a)?;
        let json = serde_json::to_string(&w.certificate())
            .map_err(|err| Failure::new(SplitterStatus::Internal, err.to_string()))?;
        write_string(out, json)
    })
}

/// Bound table for `k = 1..=max_k` as JSON with decimal-string values.
#[no_mangle]
pub unsafe extern "C" fn splitter_bounds_json(
    max_k: usize,
    radius_value: u32,
    out: *mut *mut c_char,
) -> SplitterStatus {
    guard(|| {
        if !(1..=32).contains(&max_k) {
            return Err(Failure::new(SplitterStatus::InvalidArgument, "max_k must be in 1..=32"));
        }
        let table = BoundTable::new(radius(radius_value)?, max_k);
        let json =
            serde_json::to_string(&table).map_err(|err| Failure::new(SplitterStatus::Internal, err.to_string()))?;
        write_string(out, json)
    })
}

/// Starts a game. When the human plays Splitter the engine has already made
/// its first Connector move on return.
#[no_mangle]
pub unsafe extern "C" fn splitter_game_new(
    graph: *const SplitterGraph,
    radius_value: u32,
    human_role: SplitterRole,
    analysis: bool,
    out: *mut *mut SplitterGame,
) -> SplitterStatus {
    guard(|| {
        let g = ref_arg(graph, "graph")?;
        let role = match human_role {
            SplitterRole::Connector => Role::Connector,
            SplitterRole::Splitter => Role::Splitter,
        };
        let mut cfg = GameConfig::new(Arc::clone(&g.0), radius(radius_value)?, role);
        cfg.analysis = analysis;
        let mut game = Game::new(cfg)?;
        game.play_engine()?;
        write_out(out, Box::into_raw(Box::new(SplitterGame(game))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn splitter_game_free(game: *mut SplitterGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Game state in the same JSON shape as the HTTP API.
#[no_mangle]
pub unsafe extern "C" fn splitter_game_state_json(game: *const SplitterGame, out: *mut *mut c_char) -> SplitterStatus {
    guard(|| {
        let g = &ref_arg(game, "game")?.0;
        let json = serde_json::to_string(&g.state_json())
            .map_err(|err| Failure::new(SplitterStatus::Internal, err.to_string()))?;
        write_string(out, json)
    })
}

/// Plays the human's move and lets the engine answer. `*engine_reply` is the
/// engine's vertex, or -1 when the game ended first.
#[no_mangle]
pub unsafe extern "C" fn splitter_game_move(
    game: *mut SplitterGame,
    vertex: usize,
    engine_reply: *mut i64,
) -> SplitterStatus {
    guard(|| {
        let g = &mut mut_arg(game, "game")?.0;
        if engine_reply.is_null() {
            return Err(Failure::new(SplitterStatus::NullPointer, "engine_reply is null"));
        }
        g.human_move(vertex)?;
        let reply = g.play_engine()?;
        write_out(engine_reply, reply.map_or(-1, |v| v as i64))
    })
}

/// Rank of the next arena if the pending ball lost `vertex`.
#[no_mangle]
pub unsafe extern "C" fn splitter_game_what_if(
    game: *mut SplitterGame,
    vertex: usize,
    resulting_rank: *mut usize,
    progressing: *mut bool,
) -> SplitterStatus {
    guard(|| {
        let g = &mut mut_arg(game, "game")?.0;
        if resulting_rank.is_null() || progressing.is_null() {
            return Err(Failure::new(SplitterStatus::NullPointer, "output pointer is null"));
        }
        let w = g.what_if(vertex)?;
        write_out(resulting_rank, w.resulting_rank)?;
        write_out(progressing, w.progressing)
    })
}

#[no_mangle]
pub unsafe extern "C" fn splitter_game_is_finished(game: *const SplitterGame) -> bool {
    game.as_ref().is_some_and(|g| g.0.state().is_finished())
}
