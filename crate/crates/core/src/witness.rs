//! Small induced subgraphs with the same splitter rank.
//!
//! For an arena of rank `k = 1` the witness is a single vertex. For larger
//! `k` the construction:
//!
//! 1. shrinks the arena greedily to a minimal subgraph `B` of rank `k`,
//!    in which every single deletion drops the rank to exactly `k - 1`;
//! 2. picks a center `c1` of `B` whose radius-`r` ball is all of `B`;
//! 3. takes `s` = the smallest vertex of `B`, recursively builds `H_s` in
//!    `B - s` and `H_v` in `B - v` for every `v` in `H_s`;
//! 4. joins `c1` to every vertex of those witnesses by a shortest path in `B`.
//!
//! Connector opens with `c1` on the union; whatever Splitter deletes, either
//! `H_s` or some `H_v` survives, so the union keeps rank `k`. Its size is at
//! most [`bound_f`]`(k, r)`.
//!
//! Each step's postcondition is checked. A failure is a bug in the engine or
//! here and comes back as [`WitnessError::Construction`] with the arena dump.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::bound_f;
use crate::graph::{Arena, Radius, Vertex, VertexSet};
use crate::rank::{Engine, EngineError, Rank};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("witness construction invariant broken ({stage}): {detail}")]
    Construction { stage: &'static str, detail: String },
}

fn broken(stage: &'static str, detail: String) -> WitnessError {
    WitnessError::Construction { stage, detail }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub h: VertexSet,
    pub rank: Rank,
    /// `None` for the single-vertex base case.
    pub level: Option<Level>,
}

/// One inductive step of the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    /// Minimal subgraph with the input's rank.
    pub b: VertexSet,
    pub center: Vertex,
    pub s: Vertex,
    pub hs: Arc<Witness>,
    pub hv: BTreeMap<Vertex, Arc<Witness>>,
    /// Vertices of all connecting paths.
    pub paths: VertexSet,
    /// Inner vertices of those paths.
    pub inner: VertexSet,
}

impl Witness {
    pub fn size(&self) -> usize {
        self.h.len()
    }

    /// Certificate levels in pre-order: this level, then the `H_s` subtree,
    /// then the `H_v` subtrees by increasing `v`.
    pub fn levels(&self) -> Vec<&Level> {
        let mut out = Vec::new();
        self.collect_levels(&mut out);
        out
    }

    fn collect_levels<'a>(&'a self, out: &mut Vec<&'a Level>) {
        if let Some(level) = &self.level {
            out.push(level);
            level.hs.collect_levels(out);
            for w in level.hv.values() {
                w.collect_levels(out);
            }
        }
    }

    pub fn certificate(&self) -> Certificate {
        Certificate {
            rank: self.rank,
            h: self.h.to_vec(),
            levels: self
                .levels()
                .into_iter()
                .map(|l| LevelRecord {
                    b: l.b.to_vec(),
                    c1: l.center,
                    s: l.s,
                    hs: l.hs.h.to_vec(),
                    hv: l.hv.iter().map(|(&v, w)| (v, w.h.to_vec())).collect(),
                    p: l.paths.to_vec(),
                    q: l.inner.to_vec(),
                })
                .collect(),
        }
    }
}

/// Serialized witness: `{"rank", "h", "levels": [{"B","c1","s","Hs","Hv","P","Q"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct Certificate {
    pub rank: Rank,
    pub h: Vec<Vertex>,
    pub levels: Vec<LevelRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct LevelRecord {
    #[serde(rename = "B")]
    pub b: Vec<Vertex>,
    pub c1: Vertex,
    pub s: Vertex,
    #[serde(rename = "Hs")]
    pub hs: Vec<Vertex>,
    #[serde(rename = "Hv")]
    pub hv: BTreeMap<Vertex, Vec<Vertex>>,
    #[serde(rename = "P")]
    pub p: Vec<Vertex>,
    #[serde(rename = "Q")]
    pub q: Vec<Vertex>,
}

/// Greedy minimal subgraph of the same rank: scan vertices by increasing id,
/// delete the first one whose removal keeps the rank, restart, and stop after
/// a pass that deletes nothing.
pub fn minimal_rank_subgraph(engine: &mut Engine, a: &Arena) -> Result<Arena, WitnessError> {
    if a.is_empty() {
        return Err(EngineError::EmptyArena.into());
    }
    let k = engine.splitter_rank(a)?;
    let b = minimal_set(engine, a.members(), k);
    Ok(a.induced(b).expect("greedy deletion stays inside the arena"))
}

fn minimal_set(engine: &mut Engine, members: &VertexSet, k: Rank) -> VertexSet {
    let mut cur = members.clone();
    'scan: loop {
        for v in cur.iter() {
            let smaller = cur.without(v);
            if engine.rank_set(&smaller) == k {
                cur = smaller;
                continue 'scan;
            }
        }
        return cur;
    }
}

/// Smallest vertex whose radius-`r` ball covers the whole arena.
pub fn find_center(b: &Arena, r: Radius) -> Option<Vertex> {
    b.members().iter().find(|&v| {
        b.graph()
            .eccentricity_in(b.members(), v)
            .is_some_and(|d| d <= r.get() as usize)
    })
}

/// Builds a witness for a nonempty arena.
pub fn extract_witness(engine: &mut Engine, a: &Arena) -> Result<Witness, WitnessError> {
    if a.is_empty() {
        return Err(EngineError::EmptyArena.into());
    }
    engine.splitter_rank(a)?;
    let mut builder = Builder {
        engine,
        cache: FxHashMap::default(),
    };
    let w = builder.build(a.members())?;
    Ok(Arc::unwrap_or_clone(w))
}

struct Builder<'e> {
    engine: &'e mut Engine,
    cache: FxHashMap<VertexSet, Arc<Witness>>,
}

impl Builder<'_> {
    fn build(&mut self, members: &VertexSet) -> Result<Arc<Witness>, WitnessError> {
        if let Some(w) = self.cache.get(members) {
            return Ok(Arc::clone(w));
        }
        let w = Arc::new(self.construct(members)?);
        self.cache.insert(members.clone(), Arc::clone(&w));
        Ok(w)
    }

    fn construct(&mut self, members: &VertexSet) -> Result<Witness, WitnessError> {
        let root = Arc::clone(self.engine.root());
        let r = self.engine.radius();
        let k = self.engine.rank_set(members);
        let first = members.first().expect("witness of a nonempty arena");
        if k == 1 {
            return Ok(Witness {
                h: VertexSet::from_ids(root.n(), [first]),
                rank: 1,
                level: None,
            });
        }

        let b = minimal_set(self.engine, members, k);
        for v in b.iter() {
            let dropped = self.engine.rank_set(&b.without(v));
            if dropped + 1 != k {
                return Err(broken(
                    "minimal subgraph",
                    format!("rank(B - {v}) = {dropped}, expected {}; B = {:?}", k - 1, b),
                ));
            }
        }
        let b_arena = Arena::new(Arc::clone(&root), b.clone()).expect("minimal subgraph lies in the root graph");
        let center = find_center(&b_arena, r).ok_or_else(|| {
            broken(
                "center",
                format!("no vertex of B has eccentricity <= {r}; B = {:?}, edges = {:?}", b, {
                    let g = b_arena.graph();
                    g.edges()
                        .filter(|&(u, v)| b.contains(u) && b.contains(v))
                        .collect::<Vec<_>>()
                }),
            )
        })?;

        let s = b.first().expect("B is nonempty");
        let hs = self.build(&b.without(s))?;
        if hs.rank + 1 != k {
            return Err(broken(
                "H_s",
                format!("rank(H_s) = {}, expected {}; s = {s}", hs.rank, k - 1),
            ));
        }
        let mut hv = BTreeMap::new();
        for v in hs.h.iter() {
            let w = self.build(&b.without(v))?;
            if w.rank + 1 != k || w.h.contains(v) {
                return Err(broken(
                    "H_v",
                    format!("H_{v} has rank {} or contains {v}: {:?}", w.rank, w.h),
                ));
            }
            hv.insert(v, w);
        }

        let mut targets = hs.h.clone();
        for w in hv.values() {
            targets.union_with(&w.h);
        }
        let mut paths = root.empty_set();
        let mut inner = root.empty_set();
        for x in targets.iter() {
            let path = b_arena
                .shortest_path(center, x)
                .map_err(|e| broken("paths", format!("{e}; B = {:?}", b)))?;
            if path.len() > r.get() as usize {
                return Err(broken(
                    "paths",
                    format!("path {:?} longer than r = {r}", path.vertices()),
                ));
            }
            for &y in path.vertices() {
                paths.insert(y);
            }
            for &y in path.inner() {
                inner.insert(y);
            }
        }

        let h = targets.union(&paths);
        let h_rank = self.engine.rank_set(&h);
        if h_rank != k {
            return Err(broken(
                "witness rank",
                format!("rank(H) = {h_rank}, expected {k}; H = {:?}", h),
            ));
        }
        let bound = bound_f(k, r);
        if BigUint::from(h.len()) > bound {
            return Err(broken(
                "witness size",
                format!("|H| = {} exceeds f({k}) = {bound}", h.len()),
            ));
        }
        Ok(Witness {
            h,
            rank: k,
            level: Some(Level {
                b,
                center,
                s,
                hs,
                hv,
                paths,
                inner,
            }),
        })
    }
}
