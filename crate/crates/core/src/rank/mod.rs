//! Exact splitter-rank computation.
//!
//! The rank of an arena `A` is `0` when `A` is empty and otherwise
//! `1 + max_c min_s rank(A[ball(c)] - s)`, with Connector's `c` ranging over
//! `A` and Splitter's `s` over the ball of `c`. Deleting a vertex outside the
//! ball leaves the ball intact, and by monotonicity that is never better than
//! deleting a ball vertex, so restricting `s` to the ball loses nothing.
//!
//! [`Engine`] memoizes ranks per member set of one root graph. [`naive_rank`]
//! is a separate literal transcription used as an oracle.

mod naive;

use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Arena, Graph, GraphError, Radius, Vertex, VertexSet};

pub use naive::{naive_rank, NAIVE_LIMIT};

/// Number of rounds Splitter needs to force a win; `0` for the empty arena.
pub type Rank = usize;

pub const DEFAULT_VERTEX_LIMIT: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("arena has {size} vertices, above the limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("operation needs a nonempty arena")]
    EmptyArena,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Search settings. Every combination of the pruning flags yields the same
/// ranks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EngineConfig {
    pub radius: Radius,
    /// Skip Connector moves whose ball is contained in another move's ball.
    pub dominance_pruning: bool,
    /// Stop Splitter's scan once two distinct reply values were seen.
    pub sandwich_exit: bool,
    /// Take the maximum over connected components instead of searching the
    /// whole arena.
    pub component_split: bool,
    pub memo_capacity: usize,
    pub vertex_limit: usize,
}

impl EngineConfig {
    pub fn new(radius: Radius) -> Self {
        EngineConfig {
            radius,
            dominance_pruning: false,
            sandwich_exit: true,
            component_split: true,
            memo_capacity: 1 << 12,
            vertex_limit: DEFAULT_VERTEX_LIMIT,
        }
    }

    /// All optimizations off: the plain max/min recursion plus memo.
    pub fn plain(radius: Radius) -> Self {
        EngineConfig {
            dominance_pruning: false,
            sandwich_exit: false,
            component_split: false,
            ..Self::new(radius)
        }
    }

    pub fn with_flags(mut self, dominance: bool, sandwich: bool, split: bool) -> Self {
        self.dominance_pruning = dominance;
        self.sandwich_exit = sandwich;
        self.component_split = split;
        self
    }
}

/// Splitter's best outcome against one Connector move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectorValue {
    pub value: Rank,
    /// All replies attaining `value`.
    pub argmin: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectorAnalysis {
    pub connector: Vertex,
    pub ball: VertexSet,
    pub ball_rank: Rank,
    pub value: Rank,
    pub argmin: VertexSet,
    pub progressing: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankAnalysis {
    pub rank: Rank,
    pub per_connector: Vec<ConnectorAnalysis>,
    pub optimal_connectors: VertexSet,
}

impl RankAnalysis {
    /// Smallest optimal Connector move.
    pub fn best_connector(&self) -> Vertex {
        self.optimal_connectors
            .first()
            .expect("nonempty arena has an optimal connector")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub nodes: u64,
    pub memo_hits: u64,
}

/// Memoized exact solver bound to one root graph and radius.
#[derive(Debug)]
pub struct Engine {
    root: Arc<Graph>,
    config: EngineConfig,
    memo: FxHashMap<VertexSet, u32>,
    stats: EngineStats,
}

impl Engine {
    pub fn new(root: Arc<Graph>, config: EngineConfig) -> Self {
        let memo = FxHashMap::with_capacity_and_hasher(config.memo_capacity, Default::default());
        Engine {
            root,
            config,
            memo,
            stats: EngineStats::default(),
        }
    }

    pub fn root(&self) -> &Arc<Graph> {
        &self.root
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn radius(&self) -> Radius {
        self.config.radius
    }

    pub fn stats(&self) -> EngineStats {
        self.stats
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn full_arena(&self) -> Arena {
        Arena::full(Arc::clone(&self.root))
    }

    /// Arena over this engine's root.
    pub fn arena(&self, members: VertexSet) -> Result<Arena, EngineError> {
        Ok(Arena::new(Arc::clone(&self.root), members)?)
    }

    fn check(&self, a: &Arena) -> Result<(), EngineError> {
        if !Arc::ptr_eq(a.root(), &self.root) {
            return Err(GraphError::ForeignArena.into());
        }
        self.check_size(a.members())
    }

    fn check_size(&self, members: &VertexSet) -> Result<(), EngineError> {
        let size = members.len();
        if size > self.config.vertex_limit {
            return Err(EngineError::TooLarge {
                size,
                limit: self.config.vertex_limit,
            });
        }
        Ok(())
    }

    pub fn splitter_rank(&mut self, a: &Arena) -> Result<Rank, EngineError> {
        self.check(a)?;
        Ok(self.rank_set(a.members()))
    }

    /// Rank of the arena induced by `members` on this engine's root.
    pub fn rank_of(&mut self, members: &VertexSet) -> Result<Rank, EngineError> {
        if let Some(v) = members.iter().find(|&v| v >= self.root.n()) {
            return Err(GraphError::OutOfRange {
                vertex: v,
                n: self.root.n(),
                line: None,
            }
            .into());
        }
        self.check_size(members)?;
        Ok(self.rank_set(members))
    }

    pub fn connector_value(&mut self, a: &Arena, c: Vertex) -> Result<ConnectorValue, EngineError> {
        self.check(a)?;
        let ball = a.ball(c, self.config.radius)?;
        Ok(self.value_against(&ball))
    }

    /// Splitter moves `s` in the ball of `c` whose deletion lowers the ball's
    /// rank.
    pub fn progressing_moves(&mut self, a: &Arena, c: Vertex) -> Result<VertexSet, EngineError> {
        self.check(a)?;
        let ball = a.ball(c, self.config.radius)?;
        let ball_rank = self.rank_set(&ball);
        Ok(self.progressing_in(&ball, ball_rank))
    }

    pub fn analyze(&mut self, a: &Arena) -> Result<RankAnalysis, EngineError> {
        self.check(a)?;
        if a.is_empty() {
            return Err(EngineError::EmptyArena);
        }
        let r = self.config.radius.get();
        let mut per_connector = Vec::with_capacity(a.len());
        for c in a.members().iter() {
            let ball = self.root.ball_in(a.members(), c, r);
            let ball_rank = self.rank_set(&ball);
            let ConnectorValue { value, argmin } = self.value_against(&ball);
            let progressing = if value + 1 == ball_rank {
                argmin.clone()
            } else {
                self.root.empty_set()
            };
            per_connector.push(ConnectorAnalysis {
                connector: c,
                ball,
                ball_rank,
                value,
                argmin,
                progressing,
            });
        }
        let best = per_connector.iter().map(|p| p.value).max().unwrap_or(0);
        let optimal_connectors = VertexSet::from_ids(
            self.root.n(),
            per_connector.iter().filter(|p| p.value == best).map(|p| p.connector),
        );
        Ok(RankAnalysis {
            rank: best + 1,
            per_connector,
            optimal_connectors,
        })
    }

    fn value_against(&mut self, ball: &VertexSet) -> ConnectorValue {
        let mut value = usize::MAX;
        let mut argmin = self.root.empty_set();
        for s in ball.iter() {
            let k = self.rank_set(&ball.without(s));
            if k < value {
                value = k;
                argmin = self.root.empty_set();
            }
            if k == value {
                argmin.insert(s);
            }
        }
        ConnectorValue { value, argmin }
    }

    fn progressing_in(&mut self, ball: &VertexSet, ball_rank: Rank) -> VertexSet {
        let mut out = self.root.empty_set();
        for s in ball.iter() {
            if self.rank_set(&ball.without(s)) < ball_rank {
                out.insert(s);
            }
        }
        out
    }

    pub(crate) fn rank_set(&mut self, members: &VertexSet) -> Rank {
        let size = members.len();
        if size <= 1 {
            return size;
        }
        if let Some(&k) = self.memo.get(members) {
            self.stats.memo_hits += 1;
            return k as Rank;
        }
        self.stats.nodes += 1;
        let k = if self.root.is_edgeless_in(members) {
            1
        } else if self.config.component_split && !self.root.is_connected_in(members) {
            let mut best = 0;
            for part in self.root.components_in(members) {
                best = best.max(self.rank_set(&part));
            }
            best
        } else {
            self.search(members)
        };
        self.memo.insert(members.clone(), k as u32);
        k
    }

    fn search(&mut self, members: &VertexSet) -> Rank {
        let r = self.config.radius.get();
        let mut balls: Vec<(Vertex, VertexSet)> =
            members.iter().map(|c| (c, self.root.ball_in(members, c, r))).collect();
        if self.config.dominance_pruning {
            balls = undominated(balls);
        }
        // Larger balls first: they tend to carry the maximum, which makes the
        // cutoffs below fire earlier.
        balls.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(&b.0)));

        let cap = members.len() - 1;
        let mut best = 0;
        for (_, ball) in &balls {
            // value(c) <= |ball| - 1, and the remaining balls are no larger
            if best >= cap || best + 1 >= ball.len() {
                break;
            }
            let v = self.min_reply(ball, best);
            best = best.max(v);
        }
        best + 1
    }

    /// Splitter's minimum over `s` in `ball`. Returns early with some value
    /// `<= alpha` as soon as the true minimum is known not to exceed `alpha`.
    fn min_reply(&mut self, ball: &VertexSet, alpha: Rank) -> Rank {
        let floor = if ball.len() > 1 { 1 } else { 0 };
        let mut min = usize::MAX;
        let mut first = None;
        for s in ball.iter() {
            let k = self.rank_set(&ball.without(s));
            min = min.min(k);
            if min <= alpha || min == floor {
                break;
            }
            match first {
                None => first = Some(k),
                // replies take only the values rank(ball) - 1 and rank(ball)
                Some(f) if self.config.sandwich_exit && f != k => break,
                _ => {}
            }
        }
        min
    }
}

/// Keeps one move per maximal ball: drops `c` when its ball is a proper
/// subset of another ball, or equals the ball of a smaller id.
fn undominated(balls: Vec<(Vertex, VertexSet)>) -> Vec<(Vertex, VertexSet)> {
    let keep: Vec<bool> = balls
        .iter()
        .map(|(c, ball)| {
            !balls.iter().any(|(d, other)| {
                d != c && ball.len() <= other.len() && ball.is_subset(other) && (ball.len() < other.len() || d < c)
            })
        })
        .collect();
    balls
        .into_iter()
        .zip(keep)
        .filter_map(|(b, k)| k.then_some(b))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine(n: usize, edges: &[(usize, usize)], r: u32) -> Engine {
        let g = Graph::from_edges(n, edges.iter().copied()).unwrap();
        Engine::new(Arc::new(g), EngineConfig::new(Radius::new(r).unwrap()))
    }

    fn complete(n: usize) -> Vec<(usize, usize)> {
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
    }

    fn path(n: usize) -> Vec<(usize, usize)> {
        (1..n).map(|i| (i - 1, i)).collect()
    }

    fn ids(set: &VertexSet) -> Vec<usize> {
        set.to_vec()
    }

    #[test]
    fn small_ranks() {
        for r in 1..=5 {
            let mut e = engine(1, &[], r);
            let a = e.full_arena();
            assert_eq!(e.splitter_rank(&a).unwrap(), 1);
            assert_eq!(e.rank_of(&e.root().empty_set()).unwrap(), 0);
        }
        let mut e = engine(2, &[(0, 1)], 1);
        assert_eq!(e.splitter_rank(&e.full_arena()).unwrap(), 2);
        for n in 1..=6 {
            let mut e = engine(n, &complete(n), 2);
            assert_eq!(e.splitter_rank(&e.full_arena()).unwrap(), n);
        }
        for n in 2..=20 {
            let mut e = engine(n, &path(n), 1);
            assert_eq!(e.splitter_rank(&e.full_arena()).unwrap(), 2, "P{n}");
        }
    }

    #[test]
    fn connector_value_examples() {
        let mut e = engine(3, &path(3), 1);
        let a = e.full_arena();
        let cv = e.connector_value(&a, 1).unwrap();
        assert_eq!((cv.value, ids(&cv.argmin)), (1, vec![1]));

        let mut e = engine(1, &[], 1);
        let a = e.full_arena();
        let cv = e.connector_value(&a, 0).unwrap();
        assert_eq!((cv.value, ids(&cv.argmin)), (0, vec![0]));

        let mut e = engine(3, &complete(3), 1);
        let a = e.full_arena();
        for c in 0..3 {
            let cv = e.connector_value(&a, c).unwrap();
            assert_eq!((cv.value, ids(&cv.argmin)), (2, vec![0, 1, 2]));
        }
        assert!(matches!(
            e.connector_value(&a, 5),
            Err(EngineError::Graph(GraphError::NotInArena(5)))
        ));
    }

    #[test]
    fn progressing_examples() {
        let mut e = engine(1, &[], 1);
        let a = e.full_arena();
        assert_eq!(ids(&e.progressing_moves(&a, 0).unwrap()), vec![0]);

        let mut e = engine(3, &path(3), 1);
        let a = e.full_arena();
        assert_eq!(ids(&e.progressing_moves(&a, 1).unwrap()), vec![1]);

        let mut e = engine(3, &complete(3), 1);
        let a = e.full_arena();
        for c in 0..3 {
            assert_eq!(ids(&e.progressing_moves(&a, c).unwrap()), vec![0, 1, 2]);
        }
    }

    #[test]
    fn progressing_never_leaves_the_ball() {
        let mut e = engine(5, &path(5), 1);
        let a = e.full_arena();
        let p = e.progressing_moves(&a, 0).unwrap();
        assert!(p.is_subset(&a.ball(0, Radius::new(1).unwrap()).unwrap()));
    }

    #[test]
    fn analyze_examples() {
        let mut e = engine(1, &[], 1);
        let an = e.analyze(&e.full_arena()).unwrap();
        assert_eq!(an.rank, 1);
        assert_eq!(ids(&an.optimal_connectors), vec![0]);
        assert_eq!(ids(&an.per_connector[0].progressing), vec![0]);

        let mut e = engine(3, &complete(3), 1);
        let an = e.analyze(&e.full_arena()).unwrap();
        assert_eq!(an.rank, 3);
        assert_eq!(ids(&an.optimal_connectors), vec![0, 1, 2]);
        for pc in &an.per_connector {
            assert_eq!(ids(&pc.progressing), vec![0, 1, 2]);
        }

        let mut e = engine(5, &path(5), 1);
        let an = e.analyze(&e.full_arena()).unwrap();
        assert_eq!(an.rank, 2);
        for pc in &an.per_connector {
            assert_eq!(pc.value, 1);
            assert!(pc.argmin.contains(pc.connector));
        }

        let empty = e.arena(e.root().empty_set()).unwrap();
        assert_eq!(e.analyze(&empty), Err(EngineError::EmptyArena));
    }

    #[test]
    fn limits_and_foreign_arenas() {
        let mut cfg = EngineConfig::new(Radius::new(1).unwrap());
        cfg.vertex_limit = 3;
        let g = Arc::new(Graph::from_edges(4, path(4)).unwrap());
        let mut e = Engine::new(Arc::clone(&g), cfg);
        assert_eq!(
            e.splitter_rank(&e.full_arena()),
            Err(EngineError::TooLarge { size: 4, limit: 3 })
        );
        let other = Arena::full(Arc::new(Graph::from_edges(4, path(4)).unwrap()));
        assert_eq!(
            e.splitter_rank(&other),
            Err(EngineError::Graph(GraphError::ForeignArena))
        );
        let small = Arena::from_ids(g, [0, 1, 2]).unwrap();
        assert_eq!(e.splitter_rank(&small).unwrap(), 2);
    }

    #[test]
    fn dominance_keeps_maximal_balls() {
        let n = 4;
        let ball = |ids: &[usize]| VertexSet::from_ids(n, ids.iter().copied());
        let kept = undominated(vec![
            (0, ball(&[0, 1])),
            (1, ball(&[0, 1, 2])),
            (2, ball(&[1, 2, 3])),
            (3, ball(&[1, 2, 3])),
        ]);
        let kept: Vec<_> = kept.iter().map(|(c, _)| *c).collect();
        assert_eq!(kept, vec![1, 2]);
    }
}
