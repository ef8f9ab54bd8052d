use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{EngineError, Rank};
use crate::graph::{Arena, Graph, Radius, Vertex};

/// Largest arena [`naive_rank`] accepts.
pub const NAIVE_LIMIT: usize = 12;

/// Oracle rank: the max/min recursion taken literally, with Splitter ranging
/// over every arena vertex. It shares nothing with [`super::Engine`] beyond
/// the root adjacency lists: its own ordered-set arenas, its own BFS, no
/// pruning and no component split. The table only caches finished values.
pub fn naive_rank(a: &Arena, r: Radius) -> Result<Rank, EngineError> {
    if a.len() > NAIVE_LIMIT {
        return Err(EngineError::TooLarge {
            size: a.len(),
            limit: NAIVE_LIMIT,
        });
    }
    let arena: BTreeSet<Vertex> = a.members().iter().collect();
    let mut table = HashMap::new();
    Ok(rank(a.graph(), &arena, r.get() as usize, &mut table))
}

fn rank(g: &Graph, arena: &BTreeSet<Vertex>, r: usize, table: &mut HashMap<Vec<Vertex>, Rank>) -> Rank {
    if arena.is_empty() {
        return 0;
    }
    let key: Vec<Vertex> = arena.iter().copied().collect();
    if let Some(&k) = table.get(&key) {
        return k;
    }
    let mut best = 0;
    for &c in arena {
        let nbhd = neighborhood(g, arena, c, r);
        let mut worst = Rank::MAX;
        for &s in arena {
            let mut next = nbhd.clone();
            next.remove(&s);
            worst = worst.min(rank(g, &next, r, table));
        }
        best = best.max(worst);
    }
    let k = 1 + best;
    table.insert(key, k);
    k
}

fn neighborhood(g: &Graph, arena: &BTreeSet<Vertex>, c: Vertex, r: usize) -> BTreeSet<Vertex> {
    let mut dist: HashMap<Vertex, usize> = HashMap::from([(c, 0)]);
    let mut queue = VecDeque::from([c]);
    while let Some(u) = queue.pop_front() {
        let d = dist[&u];
        if d == r {
            continue;
        }
        for &w in g.neighbors(u) {
            if arena.contains(&w) && !dist.contains_key(&w) {
                dist.insert(w, d + 1);
                queue.push_back(w);
            }
        }
    }
    dist.into_keys().collect()
}
