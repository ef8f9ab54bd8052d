//! Simple undirected graphs, induced-subgraph arenas and the traversals the
//! game is built on (radius balls, components, eccentricities, shortest paths).
//!
//! All set-level traversals take an explicit member set and never look at
//! vertices outside it, so the same root graph serves every arena of a search.

mod arena;
mod bitset;
mod io;

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

pub use arena::{Arena, Eccentricity, Path};
pub use bitset::{Iter as VertexIter, VertexSet};
pub use io::{parse_edge_list, Duplicates, GraphJson};

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{}self-loop at vertex {vertex}", at_line(*.line))]
    SelfLoop { vertex: Vertex, line: Option<usize> },
    #[error("{}vertex {vertex} out of range for n = {n}", at_line(*.line))]
    OutOfRange {
        vertex: Vertex,
        n: usize,
        line: Option<usize>,
    },
    #[error("{}duplicate edge {u}-{v}", at_line(*.line))]
    DuplicateEdge { u: Vertex, v: Vertex, line: Option<usize> },
    #[error("invalid graph JSON: {0}")]
    Json(String),
    #[error("vertex {0} is not in the arena")]
    NotInArena(Vertex),
    #[error("no path from {0} to {1} inside the arena")]
    Unreachable(Vertex, Vertex),
    #[error("radius must be at least 1, got {0}")]
    InvalidRadius(u64),
    #[error("arena belongs to a different root graph")]
    ForeignArena,
}

fn at_line(line: Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

/// Game radius `r >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(transparent)]
pub struct Radius(u32);

impl Radius {
    pub fn new(r: u32) -> Result<Self, GraphError> {
        if r == 0 {
            return Err(GraphError::InvalidRadius(0));
        }
        Ok(Radius(r))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u64> for Radius {
    type Error = GraphError;

    fn try_from(r: u64) -> Result<Self, GraphError> {
        u32::try_from(r)
            .map_err(|_| GraphError::InvalidRadius(r))
            .and_then(Radius::new)
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Finite simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    neighbors: Vec<VertexSet>,
    edge_count: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            neighbors: vec![VertexSet::empty(n); n],
            edge_count: 0,
        }
    }

    /// Builds a graph, rejecting loops, out-of-range ids and repeated edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v, None, Duplicates::Reject)?;
        }
        g.finish();
        Ok(g)
    }

    pub(crate) fn add_edge(
        &mut self,
        u: Vertex,
        v: Vertex,
        line: Option<usize>,
        duplicates: Duplicates,
    ) -> Result<(), GraphError> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::OutOfRange { vertex: x, n, line });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { vertex: u, line });
        }
        if self.neighbors[u].contains(v) {
            return match duplicates {
                Duplicates::Merge => Ok(()),
                Duplicates::Reject => Err(GraphError::DuplicateEdge {
                    u: u.min(v),
                    v: u.max(v),
                    line,
                }),
            };
        }
        self.neighbors[u].insert(v);
        self.neighbors[v].insert(u);
        self.adj[u].push(v);
        self.adj[v].push(u);
        self.edge_count += 1;
        Ok(())
    }

    pub(crate) fn finish(&mut self) {
        for list in &mut self.adj {
            list.sort_unstable();
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn neighbor_set(&self, v: Vertex) -> &VertexSet {
        &self.neighbors[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.neighbors[u].contains(v)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().copied().filter(move |&v| u < v).map(move |v| (u, v)))
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.n())
    }

    pub fn full_set(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// Closed radius-`r` ball of `v` inside `members` (BFS that never leaves
    /// the member set). `v` must be a member.
    pub fn ball_in(&self, members: &VertexSet, v: Vertex, r: u32) -> VertexSet {
        let mut seen = self.empty_set();
        seen.insert(v);
        let mut frontier = seen.clone();
        for _ in 0..r {
            let mut next = self.empty_set();
            for u in frontier.iter() {
                next.union_with(&self.neighbors[u]);
            }
            next.intersect_with(members);
            next.difference_with(&seen);
            if next.is_empty() {
                break;
            }
            seen.union_with(&next);
            frontier = next;
        }
        seen
    }

    /// Connected component of `v` within `members`.
    pub fn component_in(&self, members: &VertexSet, v: Vertex) -> VertexSet {
        self.ball_in(members, v, u32::MAX)
    }

    /// Components ordered by smallest member id.
    pub fn components_in(&self, members: &VertexSet) -> Vec<VertexSet> {
        let mut rest = members.clone();
        let mut parts = Vec::new();
        while let Some(v) = rest.first() {
            let part = self.component_in(&rest, v);
            rest.difference_with(&part);
            parts.push(part);
        }
        parts
    }

    pub fn is_connected_in(&self, members: &VertexSet) -> bool {
        match members.first() {
            None => true,
            Some(v) => self.component_in(members, v).len() == members.len(),
        }
    }

    pub fn is_edgeless_in(&self, members: &VertexSet) -> bool {
        members.iter().all(|v| !self.neighbors[v].intersects(members))
    }

    /// Number of edges with both ends in `members`.
    pub fn edge_count_in(&self, members: &VertexSet) -> usize {
        members
            .iter()
            .map(|v| self.neighbors[v].intersection(members).len())
            .sum::<usize>()
            / 2
    }

    /// Largest BFS distance from `v` to another member, `None` when some
    /// member is unreachable.
    pub fn eccentricity_in(&self, members: &VertexSet, v: Vertex) -> Option<usize> {
        let total = members.len();
        let mut seen = self.empty_set();
        seen.insert(v);
        let mut frontier = seen.clone();
        let mut depth = 0;
        let mut reached = 1;
        while reached < total {
            let mut next = self.empty_set();
            for u in frontier.iter() {
                next.union_with(&self.neighbors[u]);
            }
            next.intersect_with(members);
            next.difference_with(&seen);
            if next.is_empty() {
                return None;
            }
            depth += 1;
            reached += next.len();
            seen.union_with(&next);
            frontier = next;
        }
        Some(depth)
    }

    /// Shortest `u`-`v` path inside `members`. BFS expands neighbors in
    /// increasing id order and keeps the first parent found, so ties go to
    /// the lexicographically smallest predecessor chain.
    pub fn shortest_path_in(&self, members: &VertexSet, u: Vertex, v: Vertex) -> Option<Vec<Vertex>> {
        if u == v {
            return Some(vec![u]);
        }
        let mut parent = vec![usize::MAX; self.n()];
        parent[u] = u;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if !members.contains(y) || parent[y] != usize::MAX {
                    continue;
                }
                parent[y] = x;
                if y == v {
                    let mut path = vec![v];
                    let mut cur = v;
                    while cur != u {
                        cur = parent[cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(y);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            Graph::from_edges(3, [(0, 0)]),
            Err(GraphError::SelfLoop { vertex: 0, .. })
        ));
        assert!(matches!(
            Graph::from_edges(3, [(0, 3)]),
            Err(GraphError::OutOfRange { vertex: 3, .. })
        ));
        assert!(matches!(
            Graph::from_edges(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge { u: 0, v: 1, .. })
        ));
    }

    #[test]
    fn radius_must_be_positive() {
        assert!(Radius::new(0).is_err());
        assert_eq!(Radius::new(3).unwrap().get(), 3);
        assert!(Radius::try_from(u64::MAX).is_err());
    }

    #[test]
    fn ball_stays_inside_members() {
        let g = path(5);
        let all = g.full_set();
        assert_eq!(g.ball_in(&all, 2, 1).to_vec(), vec![1, 2, 3]);
        let cut = all.without(1);
        assert_eq!(g.ball_in(&cut, 2, 4).to_vec(), vec![2, 3, 4]);
    }

    #[test]
    fn edges_are_sorted() {
        let g = Graph::from_edges(4, [(3, 2), (1, 0), (2, 0)]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (2, 3)]);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.neighbors(0), &[1, 2]);
    }
}
