//! Game sessions: a human plays Connector or Splitter against the engine.
//!
//! Round `i` on arena `G_i`: Connector names `c` in `G_i`, Splitter names any
//! `s` in `G_i`, and the next arena is the ball of `c` in `G_i` minus `s`.
//! Splitter wins once the arena is empty. Replies outside the ball are legal
//! but marked dominated, since they leave the next arena equal to the ball.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Radius, Vertex, VertexSet};
use crate::rank::{Engine, EngineConfig, EngineError, Rank};

/// Arenas above this size get no live what-if analysis by default.
pub const DEFAULT_ANALYSIS_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Connector,
    Splitter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    AwaitingConnector,
    AwaitingSplitter,
    Finished,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlayError {
    #[error("the game needs a nonempty graph")]
    EmptyGraph,
    #[error("the game is already finished")]
    Finished,
    #[error("vertex {0} is not in the current arena")]
    IllegalVertex(Vertex),
    #[error("move not allowed while {0:?}")]
    WrongPhase(Phase),
    #[error("it is not the engine's turn")]
    NotEngineTurn,
    #[error("it is not the human's turn")]
    NotHumanTurn,
    #[error("analysis is disabled for this arena")]
    AnalysisDisabled,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Clone, Debug)]
pub struct GameConfig {
    pub graph: Arc<Graph>,
    pub radius: Radius,
    pub human_role: Role,
    pub analysis: bool,
    pub analysis_limit: usize,
    pub vertex_limit: usize,
}

impl GameConfig {
    pub fn new(graph: Arc<Graph>, radius: Radius, human_role: Role) -> Self {
        GameConfig {
            graph,
            radius,
            human_role,
            analysis: true,
            analysis_limit: DEFAULT_ANALYSIS_LIMIT,
            vertex_limit: crate::rank::DEFAULT_VERTEX_LIMIT,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub c: Vertex,
    pub s: Vertex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameState {
    pub round: usize,
    pub arena: VertexSet,
    pub phase: Phase,
    pub pending_connector: Option<Vertex>,
    pub ball: Option<VertexSet>,
    pub history: Vec<Round>,
    pub winner_round: Option<usize>,
}

impl GameState {
    fn start(graph: &Graph) -> Self {
        GameState {
            round: 1,
            arena: graph.full_set(),
            phase: Phase::AwaitingConnector,
            pending_connector: None,
            ball: None,
            history: Vec::new(),
            winner_round: None,
        }
    }

    pub fn is_finished(&self) -> bool {
        self.phase == Phase::Finished
    }
}

/// Wire form of a [`GameState`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateJson {
    pub round: usize,
    pub arena: Vec<Vertex>,
    pub phase: Phase,
    pub pending_connector: Option<Vertex>,
    pub ball: Option<Vec<Vertex>>,
    pub history: Vec<Round>,
    pub finished: bool,
    pub winner_round: Option<usize>,
    pub initial_rank: Rank,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LegalMove {
    pub vertex: Vertex,
    pub dominated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhatIf {
    pub resulting_rank: Rank,
    pub progressing: bool,
}

/// One session: configuration, engine and current state.
#[derive(Debug)]
pub struct Game {
    config: GameConfig,
    engine: Engine,
    state: GameState,
    initial_rank: Rank,
}

impl Game {
    pub fn new(config: GameConfig) -> Result<Game, PlayError> {
        if config.graph.n() == 0 {
            return Err(PlayError::EmptyGraph);
        }
        let mut engine_cfg = EngineConfig::new(config.radius);
        engine_cfg.vertex_limit = config.vertex_limit;
        let mut engine = Engine::new(Arc::clone(&config.graph), engine_cfg);
        let initial_rank = engine.splitter_rank(&engine.full_arena())?;
        Ok(Game {
            state: GameState::start(&config.graph),
            config,
            engine,
            initial_rank,
        })
    }

    /// Back to round 1 on the full graph. The engine keeps its memo.
    pub fn reset(&mut self) {
        self.state = GameState::start(&self.config.graph);
    }

    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn initial_rank(&self) -> Rank {
        self.initial_rank
    }

    pub fn state_json(&self) -> StateJson {
        let st = &self.state;
        StateJson {
            round: st.round,
            arena: st.arena.to_vec(),
            phase: st.phase,
            pending_connector: st.pending_connector,
            ball: st.ball.as_ref().map(VertexSet::to_vec),
            history: st.history.clone(),
            finished: st.is_finished(),
            winner_round: st.winner_round,
            initial_rank: self.initial_rank,
        }
    }

    /// Role to move, `None` once finished.
    pub fn to_move(&self) -> Option<Role> {
        match self.state.phase {
            Phase::AwaitingConnector => Some(Role::Connector),
            Phase::AwaitingSplitter => Some(Role::Splitter),
            Phase::Finished => None,
        }
    }

    pub fn is_engine_turn(&self) -> bool {
        self.to_move().is_some_and(|r| r != self.config.human_role)
    }

    pub fn legal_moves(&self) -> Result<Vec<LegalMove>, PlayError> {
        let st = &self.state;
        match st.phase {
            Phase::Finished => Err(PlayError::Finished),
            Phase::AwaitingConnector => Ok(st
                .arena
                .iter()
                .map(|vertex| LegalMove {
                    vertex,
                    dominated: false,
                })
                .collect()),
            Phase::AwaitingSplitter => {
                let ball = st.ball.as_ref().expect("ball present while awaiting splitter");
                Ok(st
                    .arena
                    .iter()
                    .map(|vertex| LegalMove {
                        vertex,
                        dominated: !ball.contains(vertex),
                    })
                    .collect())
            }
        }
    }

    /// Plays `v` for whichever role is to move.
    pub fn apply_move(&mut self, v: Vertex) -> Result<(), PlayError> {
        let st = &mut self.state;
        if st.is_finished() {
            return Err(PlayError::Finished);
        }
        if !st.arena.contains(v) {
            return Err(PlayError::IllegalVertex(v));
        }
        match st.phase {
            Phase::AwaitingConnector => {
                let ball = self.config.graph.ball_in(&st.arena, v, self.config.radius.get());
                st.pending_connector = Some(v);
                st.ball = Some(ball);
                st.phase = Phase::AwaitingSplitter;
            }
            Phase::AwaitingSplitter => {
                let c = st.pending_connector.take().expect("pending connector");
                let mut next = st.ball.take().expect("ball present while awaiting splitter");
                next.remove(v);
                st.arena = next;
                st.history.push(Round { c, s: v });
                st.round += 1;
                if st.arena.is_empty() {
                    st.phase = Phase::Finished;
                    st.winner_round = Some(st.history.len());
                } else {
                    st.phase = Phase::AwaitingConnector;
                }
            }
            Phase::Finished => unreachable!(),
        }
        Ok(())
    }

    /// Human move: rejected when it is the engine's turn.
    pub fn human_move(&mut self, v: Vertex) -> Result<(), PlayError> {
        if self.state.is_finished() {
            return Err(PlayError::Finished);
        }
        if self.is_engine_turn() {
            return Err(PlayError::NotHumanTurn);
        }
        self.apply_move(v)
    }

    /// Optimal move for the side to play, smallest id among ties.
    pub fn best_move(&mut self) -> Result<Vertex, PlayError> {
        let arena = self.engine.arena(self.state.arena.clone())?;
        match self.state.phase {
            Phase::Finished => Err(PlayError::Finished),
            Phase::AwaitingConnector => Ok(self.engine.analyze(&arena)?.best_connector()),
            Phase::AwaitingSplitter => {
                let c = self.state.pending_connector.expect("pending connector");
                let value = self.engine.connector_value(&arena, c)?;
                Ok(value.argmin.first().expect("ball is nonempty"))
            }
        }
    }

    /// The engine's choice when it is the engine's turn.
    pub fn engine_move(&mut self) -> Result<Vertex, PlayError> {
        if self.state.is_finished() {
            return Err(PlayError::Finished);
        }
        if !self.is_engine_turn() {
            return Err(PlayError::NotEngineTurn);
        }
        self.best_move()
    }

    /// Computes and applies the engine's move if it is the engine's turn.
    pub fn play_engine(&mut self) -> Result<Option<Vertex>, PlayError> {
        if !self.is_engine_turn() {
            return Ok(None);
        }
        let v = self.engine_move()?;
        self.apply_move(v)?;
        Ok(Some(v))
    }

    /// Rank of the next arena if Splitter deleted `v` now.
    pub fn what_if(&mut self, v: Vertex) -> Result<WhatIf, PlayError> {
        let st = &self.state;
        if st.phase != Phase::AwaitingSplitter {
            return Err(PlayError::WrongPhase(st.phase));
        }
        if !st.arena.contains(v) {
            return Err(PlayError::IllegalVertex(v));
        }
        if !self.config.analysis || st.arena.len() > self.config.analysis_limit {
            return Err(PlayError::AnalysisDisabled);
        }
        let ball = st.ball.clone().expect("ball present while awaiting splitter");
        let ball_rank = self.engine.rank_of(&ball)?;
        let resulting_rank = self.engine.rank_of(&ball.without(v))?;
        Ok(WhatIf {
            resulting_rank,
            progressing: resulting_rank < ball_rank,
        })
    }
}
