use std::fmt;
use std::sync::Arc;

use super::{Graph, GraphError, Radius, Vertex, VertexSet};

/// Induced subgraph of a shared root graph, identified by its member set.
#[derive(Clone)]
pub struct Arena {
    root: Arc<Graph>,
    members: VertexSet,
}

impl fmt::Debug for Arena {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Arena")
            .field("n_root", &self.root.n())
            .field("members", &self.members)
            .finish()
    }
}

impl PartialEq for Arena {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.root, &other.root) && self.members == other.members
    }
}

impl Eq for Arena {}

/// Result of [`Arena::eccentricity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eccentricity {
    Finite(usize),
    Unbounded,
}

impl Eccentricity {
    pub fn within(self, r: Radius) -> bool {
        matches!(self, Eccentricity::Finite(d) if d <= r.get() as usize)
    }
}

/// Simple path `v0, ..., vt` of length `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path(Vec<Vertex>);

impl Path {
    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Vertices other than the two endpoints.
    pub fn inner(&self) -> &[Vertex] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }
}

impl Arena {
    /// The whole root graph.
    pub fn full(root: Arc<Graph>) -> Self {
        let members = root.full_set();
        Arena { root, members }
    }

    /// Arena on an explicit member set; ids must be in range.
    pub fn new(root: Arc<Graph>, members: VertexSet) -> Result<Self, GraphError> {
        if let Some(bad) = members.iter().find(|&v| v >= root.n()) {
            return Err(GraphError::OutOfRange {
                vertex: bad,
                n: root.n(),
                line: None,
            });
        }
        if members.capacity() != root.full_set().capacity() {
            return Ok(Arena {
                members: VertexSet::from_ids(root.n(), members.iter()),
                root,
            });
        }
        Ok(Arena { root, members })
    }

    pub fn from_ids<I>(root: Arc<Graph>, ids: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Vertex>,
    {
        let n = root.n();
        let mut members = VertexSet::empty(n);
        for v in ids {
            if v >= n {
                return Err(GraphError::OutOfRange {
                    vertex: v,
                    n,
                    line: None,
                });
            }
            members.insert(v);
        }
        Ok(Arena { root, members })
    }

    pub fn root(&self) -> &Arc<Graph> {
        &self.root
    }

    pub fn graph(&self) -> &Graph {
        &self.root
    }

    pub fn members(&self) -> &VertexSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.root.edge_count_in(&self.members)
    }

    /// Sub-arena on the same root. `members` must be a subset of this arena.
    pub fn induced(&self, members: VertexSet) -> Result<Arena, GraphError> {
        if let Some(bad) = members.iter().find(|&v| !self.members.contains(v)) {
            return Err(GraphError::NotInArena(bad));
        }
        Ok(Arena {
            root: Arc::clone(&self.root),
            members,
        })
    }

    fn require(&self, v: Vertex) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::NotInArena(v))
        }
    }

    /// Closed radius-`r` neighborhood of `v` measured inside the arena.
    pub fn ball(&self, v: Vertex, r: Radius) -> Result<VertexSet, GraphError> {
        self.require(v)?;
        Ok(self.root.ball_in(&self.members, v, r.get()))
    }

    /// The arena restricted to the ball of `v`.
    pub fn restrict_to_ball(&self, v: Vertex, r: Radius) -> Result<Arena, GraphError> {
        let members = self.ball(v, r)?;
        Ok(Arena {
            root: Arc::clone(&self.root),
            members,
        })
    }

    pub fn delete_vertex(&self, s: Vertex) -> Result<Arena, GraphError> {
        self.require(s)?;
        Ok(Arena {
            root: Arc::clone(&self.root),
            members: self.members.without(s),
        })
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.root.components_in(&self.members)
    }

    pub fn eccentricity(&self, v: Vertex) -> Result<Eccentricity, GraphError> {
        self.require(v)?;
        Ok(match self.root.eccentricity_in(&self.members, v) {
            Some(d) => Eccentricity::Finite(d),
            None => Eccentricity::Unbounded,
        })
    }

    pub fn shortest_path(&self, u: Vertex, v: Vertex) -> Result<Path, GraphError> {
        self.require(u)?;
        self.require(v)?;
        self.root
            .shortest_path_in(&self.members, u, v)
            .map(Path)
            .ok_or(GraphError::Unreachable(u, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arena(n: usize, edges: &[(usize, usize)]) -> Arena {
        Arena::full(Arc::new(Graph::from_edges(n, edges.iter().copied()).unwrap()))
    }

    fn path(n: usize) -> Arena {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        arena(n, &edges)
    }

    fn r(x: u32) -> Radius {
        Radius::new(x).unwrap()
    }

    #[test]
    fn ball_examples() {
        assert_eq!(path(5).ball(2, r(1)).unwrap().to_vec(), vec![1, 2, 3]);
        let iso = arena(3, &[(0, 1)]);
        assert_eq!(iso.ball(2, r(7)).unwrap().to_vec(), vec![2]);
        let p = path(6);
        assert_eq!(p.ball(0, r(5)).unwrap(), *p.members());
        assert_eq!(p.ball(9, r(1)), Err(GraphError::NotInArena(9)));
    }

    #[test]
    fn delete_vertex_examples() {
        let k2 = arena(2, &[(0, 1)]);
        for v in 0..2 {
            let a = k2.delete_vertex(v).unwrap();
            assert_eq!(a.len(), 1);
            assert_eq!(a.edge_count(), 0);
        }
        let k1 = arena(1, &[]);
        assert!(k1.delete_vertex(0).unwrap().is_empty());
        let p3 = path(3).delete_vertex(1).unwrap();
        assert_eq!(p3.members().to_vec(), vec![0, 2]);
        assert_eq!(p3.edge_count(), 0);
        assert!(p3.delete_vertex(1).is_err());
    }

    #[test]
    fn components_examples() {
        let empty = arena(3, &[(0, 1)]).induced(VertexSet::empty(3)).unwrap();
        assert!(empty.components().is_empty());
        let p3 = path(3).delete_vertex(1).unwrap();
        let parts: Vec<_> = p3.components().iter().map(|c| c.to_vec()).collect();
        assert_eq!(parts, vec![vec![0], vec![2]]);
        let p5 = path(5);
        assert_eq!(p5.components(), vec![p5.members().clone()]);
    }

    #[test]
    fn eccentricity_examples() {
        let k3 = arena(3, &[(0, 1), (1, 2), (0, 2)]);
        for v in 0..3 {
            assert_eq!(k3.eccentricity(v).unwrap(), Eccentricity::Finite(1));
        }
        let p3 = path(3);
        assert_eq!(p3.eccentricity(1).unwrap(), Eccentricity::Finite(1));
        assert_eq!(p3.eccentricity(0).unwrap(), Eccentricity::Finite(2));
        let two = arena(2, &[]);
        assert_eq!(two.eccentricity(0).unwrap(), Eccentricity::Unbounded);
        assert_eq!(arena(1, &[]).eccentricity(0).unwrap(), Eccentricity::Finite(0));
    }

    #[test]
    fn shortest_path_examples() {
        let p5 = path(5);
        let single = p5.shortest_path(3, 3).unwrap();
        assert_eq!(single.vertices(), &[3]);
        assert_eq!(single.len(), 0);
        assert_eq!(p5.shortest_path(0, 2).unwrap().vertices(), &[0, 1, 2]);
        let c4 = arena(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let p = c4.shortest_path(0, 2).unwrap();
        assert_eq!(p.vertices(), &[0, 1, 2]);
        assert_eq!(p.inner(), &[1]);
        let cut = p5.delete_vertex(2).unwrap();
        assert_eq!(cut.shortest_path(0, 4), Err(GraphError::Unreachable(0, 4)));
    }

    fn random_arena() -> impl Strategy<Value = (Arena, usize)> {
        (1usize..14).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let m = pairs.len();
            (
                proptest::collection::vec(any::<bool>(), m),
                proptest::collection::vec(any::<bool>(), n),
                0..n,
            )
                .prop_map(move |(mask, keep, v)| {
                    let edges = pairs.iter().zip(&mask).filter(|(_, &b)| b).map(|(&e, _)| e);
                    let g = Arc::new(Graph::from_edges(n, edges).unwrap());
                    let ids = (0..n).filter(|&i| keep[i] || i == v);
                    (Arena::from_ids(g, ids).unwrap(), v)
                })
        })
    }

    proptest! {
        #[test]
        fn ball_properties((a, v) in random_arena(), rad in 1u32..5) {
            let small = a.ball(v, r(rad)).unwrap();
            let big = a.ball(v, r(rad + 1)).unwrap();
            prop_assert!(small.contains(v));
            prop_assert!(small.is_subset(&big));
            let comp = a.graph().component_in(a.members(), v);
            prop_assert!(small.is_subset(&comp));
            for u in small.iter() {
                prop_assert!(a.shortest_path(v, u).unwrap().len() <= rad as usize);
            }
        }

        #[test]
        fn deletion_commutes_with_ball((a, v) in random_arena(), rad in 1u32..4) {
            for s in a.members().iter().filter(|&s| s != v) {
                let smaller = a.delete_vertex(s).unwrap();
                let direct = smaller.ball(v, r(rad)).unwrap();
                let via_root = a.graph().ball_in(&a.members().without(s), v, rad);
                prop_assert_eq!(&direct, &via_root);
                prop_assert!(!direct.contains(s));
            }
        }

        #[test]
        fn components_partition((a, _v) in random_arena()) {
            let parts = a.components();
            let mut union = a.graph().empty_set();
            for (i, p) in parts.iter().enumerate() {
                prop_assert!(!union.intersects(p));
                union.union_with(p);
                if i > 0 {
                    prop_assert!(parts[i - 1].first() < p.first());
                }
            }
            prop_assert_eq!(&union, a.members());
        }
    }
}
