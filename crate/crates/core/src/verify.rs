//! Certification runs over graph corpora.
//!
//! For every corpus graph and radius the checks confirm, on that instance:
//!
//! * `progressing_bound`: each Connector move has at most `g(k)` progressing replies,
//!   `k` the graph's rank;
//! * `witness_bound`: the extracted witness has rank `k` and at most `f(k)`
//!   vertices;
//! * `containment`: the progressing replies to `c` lie inside the witness
//!   of the ball of `c`;
//! * `invariants`: monotonicity, the deletion sandwich, the value dichotomy,
//!   component decomposition and `rank = 1` iff edgeless.
//!
//! Violations carry the serialized graph plus the offending moves so they
//! can be replayed.

use std::sync::Arc;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{bound_f, bound_g};
use crate::generators::{all_labeled_graphs, generate, Family, FamilySpec, GenError};
use crate::graph::{Arena, Graph, GraphError, GraphJson, Radius, Vertex, VertexSet};
use crate::rank::{naive_rank, Engine, EngineConfig, EngineError, Rank, NAIVE_LIMIT};
use crate::witness::{extract_witness, WitnessError};

pub const REPORT_VERSION: &str = concat!("splitter-core ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("corpus needs at least one radius")]
    NoRadius,
}

/// Which checks a run performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckSelection {
    pub progressing_bound: bool,
    pub witness_bound: bool,
    pub containment: bool,
    pub invariants: bool,
}

impl Default for CheckSelection {
    fn default() -> Self {
        CheckSelection {
            progressing_bound: true,
            witness_bound: true,
            containment: true,
            invariants: true,
        }
    }
}

/// Bound functions used by the checks. Replaceable so the harness can prove
/// it catches a wrong bound.
#[derive(Clone, Copy)]
pub struct Bounds {
    pub f: fn(usize, Radius) -> BigUint,
    pub g: fn(usize, Radius) -> BigUint,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { f: bound_f, g: bound_g }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CorpusEntry {
    /// Every labeled graph on `min_n..=max_n` vertices.
    AllLabeled {
        #[serde(default = "one")]
        min_n: usize,
        max_n: usize,
    },
    Family {
        #[serde(flatten)]
        spec: FamilySpec,
    },
    /// `count` G(n, p) graphs; graph `i` uses `n = n_min + i mod (n_max - n_min + 1)`,
    /// `p = ps[(i / #n) mod #p]` and seed `seed + i`.
    GnpBatch {
        count: usize,
        n_min: usize,
        n_max: usize,
        ps: Vec<f64>,
        seed: u64,
    },
    Graph {
        id: String,
        graph: GraphJson,
    },
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSpec {
    pub name: String,
    pub radii: Vec<u32>,
    pub entries: Vec<CorpusEntry>,
    /// Random arenas per graph in the invariant check.
    #[serde(default = "default_samples")]
    pub invariant_samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_limit")]
    pub vertex_limit: usize,
}

fn default_samples() -> usize {
    8
}

fn default_limit() -> usize {
    crate::rank::DEFAULT_VERTEX_LIMIT
}

/// One corpus member.
#[derive(Clone, Debug)]
pub struct CorpusGraph {
    pub id: String,
    pub graph: Arc<Graph>,
}

impl CorpusSpec {
    pub fn new(name: &str, radii: &[u32], entries: Vec<CorpusEntry>) -> Self {
        CorpusSpec {
            name: name.to_string(),
            radii: radii.to_vec(),
            entries,
            invariant_samples: default_samples(),
            seed: 0,
            vertex_limit: default_limit(),
        }
    }

    pub fn expand(&self) -> Result<Vec<CorpusGraph>, CorpusError> {
        let mut out = Vec::new();
        for entry in &self.entries {
            match entry {
                CorpusEntry::AllLabeled { min_n, max_n } => {
                    for n in *min_n..=*max_n {
                        for (mask, g) in all_labeled_graphs(n)?.enumerate() {
                            out.push(CorpusGraph {
                                id: format!("labeled(n={n},mask={mask})"),
                                graph: Arc::new(g),
                            });
                        }
                    }
                }
                CorpusEntry::Family { spec } => {
                    let family = spec.to_family()?;
                    out.push(CorpusGraph {
                        id: family.label(),
                        graph: Arc::new(generate(&family)?),
                    });
                }
                CorpusEntry::GnpBatch {
                    count,
                    n_min,
                    n_max,
                    ps,
                    seed,
                } => {
                    for family in gnp_batch(*count, *n_min, *n_max, ps, *seed)? {
                        out.push(CorpusGraph {
                            id: family.label(),
                            graph: Arc::new(generate(&family)?),
                        });
                    }
                }
                CorpusEntry::Graph { id, graph } => out.push(CorpusGraph {
                    id: id.clone(),
                    graph: Arc::new(Graph::try_from(graph.clone())?),
                }),
            }
        }
        Ok(out)
    }

    /// All labeled graphs on `1..=max_n` vertices.
    pub fn all_labeled(max_n: usize, radii: &[u32]) -> Self {
        CorpusSpec::new("all-labeled", radii, vec![CorpusEntry::AllLabeled { min_n: 1, max_n }])
    }

    /// Paths, cycles and stars up to 20 vertices, grids and balanced trees
    /// up to 20 vertices, and subdivided cliques `K_t`, `t <= 5`, with up to
    /// two subdivision vertices per edge.
    pub fn families(radii: &[u32]) -> Self {
        CorpusSpec::new("families", radii, family_entries())
    }

    /// 300 seeded G(n, p) graphs, `n` in 6..=9, `p` in {0.2, 0.4, 0.6}.
    pub fn gnp(radii: &[u32], seed: u64) -> Self {
        CorpusSpec::new("gnp", radii, vec![gnp_entry(seed)])
    }

    /// Labeled 5-vertex graphs, the seeded G(n, p) batch and the families.
    pub fn acceptance(radii: &[u32]) -> Self {
        let mut entries = vec![CorpusEntry::AllLabeled { min_n: 5, max_n: 5 }, gnp_entry(0)];
        entries.extend(family_entries());
        CorpusSpec::new("acceptance", radii, entries)
    }
}

fn gnp_entry(seed: u64) -> CorpusEntry {
    CorpusEntry::GnpBatch {
        count: 300,
        n_min: 6,
        n_max: 9,
        ps: vec![0.2, 0.4, 0.6],
        seed,
    }
}

pub fn gnp_batch(count: usize, n_min: usize, n_max: usize, ps: &[f64], seed: u64) -> Result<Vec<Family>, GenError> {
    if n_max < n_min || ps.is_empty() {
        return Err(GenError::Invalid(format!(
            "gnp batch needs n_min <= n_max and some p, got {n_min}..={n_max}, {ps:?}"
        )));
    }
    let sizes = n_max - n_min + 1;
    Ok((0..count)
        .map(|i| Family::Gnp {
            n: n_min + i % sizes,
            p: ps[(i / sizes) % ps.len()],
            seed: seed.wrapping_add(i as u64),
        })
        .collect())
}

fn family_entries() -> Vec<CorpusEntry> {
    let mut fams = Vec::new();
    for n in 1..=20 {
        fams.push(Family::Path { n });
        fams.push(Family::Star { n });
        if n >= 3 {
            fams.push(Family::Cycle { n });
        }
    }
    for rows in 2..=4 {
        for cols in rows..=20 / rows {
            fams.push(Family::Grid { rows, cols });
        }
    }
    for (branching, height) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1)] {
        fams.push(Family::BalancedTree { branching, height });
    }
    for t in 1..=5 {
        for s in 0..=2 {
            fams.push(Family::SubdividedClique { t, s });
        }
    }
    fams.into_iter()
        .map(|f| CorpusEntry::Family { spec: f.to_spec() })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub graph_id: String,
    pub r: u32,
    pub check: &'static str,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connector: Option<Vertex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub splitter: Option<Vertex>,
    pub graph: GraphJson,
}

/// Counts of individual invariant checks performed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InvariantTally {
    pub monotonicity: usize,
    pub sandwich: usize,
    pub dichotomy: usize,
    pub components: usize,
    pub edgeless: usize,
}

impl InvariantTally {
    fn add(&mut self, other: InvariantTally) {
        self.monotonicity += other.monotonicity;
        self.sandwich += other.sandwich;
        self.dichotomy += other.dichotomy;
        self.components += other.components;
        self.edgeless += other.edgeless;
    }
}

/// Per-graph, per-radius record.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GraphResult {
    pub id: String,
    pub n: usize,
    pub m: usize,
    pub r: u32,
    pub rank: Option<Rank>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub progressing_counts: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_progressing: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_g: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_f: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_size: Option<usize>,
    /// Witness size of each Connector ball, in vertex order.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ball_witness_sizes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantTally>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub violations: Vec<Violation>,
}

impl GraphResult {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportSpec {
    pub version: &'static str,
    pub corpus: CorpusSpec,
    pub checks: CheckSelection,
}

/// `{"spec": ..., "results": [...], "violations": [...], "pass": bool}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub spec: ReportSpec,
    pub results: Vec<GraphResult>,
    pub violations: Vec<Violation>,
    pub pass: bool,
}

impl CheckReport {
    pub fn skipped(&self) -> usize {
        self.results.iter().filter(|r| r.skipped.is_some()).count()
    }
}

/// Runs checks for one graph at one radius, sharing a single engine.
pub struct Checker {
    pub id: String,
    pub engine: Engine,
    pub bounds: Bounds,
    result: GraphResult,
}

impl Checker {
    pub fn new(id: impl Into<String>, graph: Arc<Graph>, config: EngineConfig) -> Self {
        let result = GraphResult {
            id: id.into(),
            n: graph.n(),
            m: graph.edge_count(),
            r: config.radius.get(),
            ..Default::default()
        };
        Checker {
            id: result.id.clone(),
            engine: Engine::new(graph, config),
            bounds: Bounds::default(),
            result,
        }
    }

    pub fn with_bounds(mut self, bounds: Bounds) -> Self {
        self.bounds = bounds;
        self
    }

    fn radius(&self) -> Radius {
        self.engine.radius()
    }

    fn violation(&mut self, check: &'static str, detail: String, c: Option<Vertex>, s: Option<Vertex>) {
        self.result.violations.push(Violation {
            graph_id: self.id.clone(),
            r: self.radius().get(),
            check,
            detail,
            connector: c,
            splitter: s,
            graph: GraphJson::from(self.engine.root().as_ref()),
        });
    }

    fn rank(&mut self) -> Result<Rank, EngineError> {
        if let Some(k) = self.result.rank {
            return Ok(k);
        }
        let a = self.engine.full_arena();
        let k = self.engine.splitter_rank(&a)?;
        self.result.rank = Some(k);
        Ok(k)
    }

    fn skip(&mut self, why: String) {
        tracing::warn!(graph = %self.id, r = self.radius().get(), "skipped: {why}");
        self.result.skipped = Some(why);
    }

    pub fn check_progressing_bound(&mut self) -> Result<(), EngineError> {
        let k = self.rank()?;
        if k == 0 {
            return Ok(());
        }
        let bound = (self.bounds.g)(k, self.radius());
        let a = self.engine.full_arena();
        let mut counts = Vec::with_capacity(a.len());
        for c in a.members().iter() {
            let moves = self.engine.progressing_moves(&a, c)?;
            let count = moves.len();
            if BigUint::from(count) > bound {
                self.violation(
                    "progressing_bound",
                    format!("{count} progressing moves {:?} exceed g({k}) = {bound}", moves),
                    Some(c),
                    None,
                );
            }
            counts.push(count);
        }
        self.result.max_progressing = counts.iter().copied().max();
        self.result.progressing_counts = counts;
        self.result.bound_g = Some(bound.to_string());
        Ok(())
    }

    pub fn check_witness_bound(&mut self) -> Result<(), EngineError> {
        let k = self.rank()?;
        if k == 0 {
            return Ok(());
        }
        let bound = (self.bounds.f)(k, self.radius());
        self.result.bound_f = Some(bound.to_string());
        let a = self.engine.full_arena();
        match extract_witness(&mut self.engine, &a) {
            Ok(w) => {
                self.result.witness_size = Some(w.size());
                let h = self.engine.arena(w.h.clone())?;
                let h_rank = self.engine.splitter_rank(&h)?;
                if h_rank != k {
                    self.violation(
                        "witness_bound",
                        format!("rank(H) = {h_rank} != {k}; H = {:?}", w.h),
                        None,
                        None,
                    );
                }
                if h.len() <= NAIVE_LIMIT {
                    let oracle = naive_rank(&h, self.radius())?;
                    if oracle != k {
                        self.violation(
                            "witness_bound",
                            format!("naive rank(H) = {oracle} != {k}; H = {:?}", w.h),
                            None,
                            None,
                        );
                    }
                }
                if BigUint::from(w.size()) > bound {
                    self.violation(
                        "witness_bound",
                        format!("|H| = {} exceeds f({k}) = {bound}", w.size()),
                        None,
                        None,
                    );
                }
            }
            Err(WitnessError::Engine(e)) => return Err(e),
            Err(e) => self.violation("witness_bound", e.to_string(), None, None),
        }
        Ok(())
    }

    pub fn check_containment(&mut self) -> Result<(), EngineError> {
        let a = self.engine.full_arena();
        let r = self.radius();
        let mut sizes = Vec::with_capacity(a.len());
        for c in a.members().iter() {
            let ball = a.restrict_to_ball(c, r)?;
            let moves = self.engine.progressing_moves(&a, c)?;
            match extract_witness(&mut self.engine, &ball) {
                Ok(w) => {
                    if !moves.is_subset(&w.h) {
                        let outside = moves.difference(&w.h);
                        self.violation(
                            "containment",
                            format!("progressing {:?} not inside witness {:?}", moves, w.h),
                            Some(c),
                            outside.first(),
                        );
                    }
                    sizes.push(w.size());
                }
                Err(WitnessError::Engine(e)) => return Err(e),
                Err(e) => self.violation("containment", e.to_string(), Some(c), None),
            }
        }
        self.result.ball_witness_sizes = sizes;
        Ok(())
    }

    /// `samples` random arenas for monotonicity and the sandwich, every
    /// `(c, s)` pair for the dichotomy, and the component/edgeless checks on
    /// the whole graph and on the sampled arenas.
    pub fn check_invariants(&mut self, samples: usize, seed: u64) -> Result<InvariantTally, EngineError> {
        let mut tally = InvariantTally::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let root = Arc::clone(self.engine.root());
        let full = root.full_set();
        tally.add(self.monotonicity(&mut rng, &full, samples)?);
        tally.add(self.sandwich(&mut rng, &full, samples)?);
        tally.add(self.dichotomy(&full)?);
        tally.add(self.edgeless(&full)?);
        tally.add(self.components(&full)?);
        for _ in 0..samples {
            let sub = random_subset(&mut rng, &full);
            tally.add(self.edgeless(&sub)?);
            tally.add(self.components(&sub)?);
        }
        let mut total = self.result.invariants.unwrap_or_default();
        total.add(tally);
        self.result.invariants = Some(total);
        Ok(tally)
    }

    /// `rank(A) <= rank(B)` for random `A ⊆ B ⊆ within`.
    pub fn monotonicity(
        &mut self,
        rng: &mut ChaCha8Rng,
        within: &VertexSet,
        samples: usize,
    ) -> Result<InvariantTally, EngineError> {
        for _ in 0..samples {
            let big = random_subset(rng, within);
            let small = random_subset(rng, &big);
            let (kb, ks) = (self.engine.rank_of(&big)?, self.engine.rank_of(&small)?);
            if ks > kb {
                self.violation(
                    "monotonicity",
                    format!("rank({:?}) = {ks} > rank({:?}) = {kb}", small, big),
                    None,
                    None,
                );
            }
        }
        Ok(InvariantTally {
            monotonicity: samples,
            ..Default::default()
        })
    }

    /// `rank(A) - 1 <= rank(A - v) <= rank(A)` for random nonempty `A` and `v ∈ A`.
    pub fn sandwich(
        &mut self,
        rng: &mut ChaCha8Rng,
        within: &VertexSet,
        samples: usize,
    ) -> Result<InvariantTally, EngineError> {
        let mut done = 0;
        if within.is_empty() {
            return Ok(InvariantTally::default());
        }
        while done < samples {
            let a = random_subset(rng, within);
            let Some(v) = random_member(rng, &a) else { continue };
            let k = self.engine.rank_of(&a)?;
            let kv = self.engine.rank_of(&a.without(v))?;
            if kv > k || kv + 1 < k {
                self.violation(
                    "sandwich",
                    format!("rank({:?}) = {k}, after deleting {v}: {kv}", a),
                    None,
                    Some(v),
                );
            }
            done += 1;
        }
        Ok(InvariantTally {
            sandwich: samples,
            ..Default::default()
        })
    }

    /// Every reply to every Connector move in `arena` lands on `k_c - 1` or `k_c`.
    pub fn dichotomy(&mut self, arena: &VertexSet) -> Result<InvariantTally, EngineError> {
        let r = self.radius().get();
        let root = Arc::clone(self.engine.root());
        let mut count = 0;
        for c in arena.iter() {
            let ball = root.ball_in(arena, c, r);
            let kb = self.engine.rank_of(&ball)?;
            for s in ball.iter() {
                let ks = self.engine.rank_of(&ball.without(s))?;
                if ks != kb && ks + 1 != kb {
                    self.violation(
                        "dichotomy",
                        format!("ball rank {kb}, after deleting {s}: {ks}"),
                        Some(c),
                        Some(s),
                    );
                }
                count += 1;
            }
        }
        Ok(InvariantTally {
            dichotomy: count,
            ..Default::default()
        })
    }

    /// `rank = 1` exactly for nonempty edgeless arenas.
    pub fn edgeless(&mut self, arena: &VertexSet) -> Result<InvariantTally, EngineError> {
        let k = self.engine.rank_of(arena)?;
        let edgeless = !arena.is_empty() && self.engine.root().is_edgeless_in(arena);
        if (k == 1) != edgeless {
            self.violation(
                "edgeless",
                format!("rank({:?}) = {k}, edgeless = {edgeless}", arena),
                None,
                None,
            );
        }
        Ok(InvariantTally {
            edgeless: 1,
            ..Default::default()
        })
    }

    /// Rank equals the maximum component rank, checked against the naive
    /// oracle when the arena is small enough, and against the engine with
    /// component splitting turned off otherwise.
    pub fn components(&mut self, arena: &VertexSet) -> Result<InvariantTally, EngineError> {
        let root = Arc::clone(self.engine.root());
        let r = self.radius();
        let k = self.engine.rank_of(arena)?;
        let parts = root.components_in(arena);
        let reference = if arena.len() <= NAIVE_LIMIT {
            let mut best = 0;
            for p in &parts {
                best = best.max(naive_rank(&Arena::new(Arc::clone(&root), p.clone())?, r)?);
            }
            let whole = naive_rank(&Arena::new(Arc::clone(&root), arena.clone())?, r)?;
            if whole != best {
                self.violation(
                    "components",
                    format!("naive rank {whole} != max component rank {best}"),
                    None,
                    None,
                );
            }
            whole
        } else {
            let mut cfg = self.engine.config().clone();
            cfg.component_split = false;
            let mut plain = Engine::new(Arc::clone(&root), cfg);
            plain.rank_of(arena)?
        };
        if k != reference {
            self.violation(
                "components",
                format!("engine rank {k} != reference {reference} on {:?}", arena),
                None,
                None,
            );
        }
        Ok(InvariantTally {
            components: 1,
            ..Default::default()
        })
    }

    pub fn finish(self) -> GraphResult {
        self.result
    }

    pub fn result(&self) -> &GraphResult {
        &self.result
    }
}

fn random_subset(rng: &mut ChaCha8Rng, within: &VertexSet) -> VertexSet {
    let mut out = within.clone();
    for v in within.iter() {
        if rng.random_bool(0.5) {
            out.remove(v);
        }
    }
    out
}

fn random_member(rng: &mut ChaCha8Rng, set: &VertexSet) -> Option<Vertex> {
    let len = set.len();
    if len == 0 {
        return None;
    }
    set.iter().nth(rng.random_range(0..len))
}

/// Runs the selected checks on one graph at one radius.
pub fn check_graph(
    item: &CorpusGraph,
    config: EngineConfig,
    checks: CheckSelection,
    samples: usize,
    seed: u64,
    bounds: Bounds,
) -> GraphResult {
    let limit = config.vertex_limit;
    let mut checker = Checker::new(item.id.clone(), Arc::clone(&item.graph), config).with_bounds(bounds);
    if item.graph.n() > limit {
        checker.skip(format!("{} vertices exceed the engine limit {limit}", item.graph.n()));
        return checker.finish();
    }
    let outcome = (|| -> Result<(), EngineError> {
        checker.rank()?;
        if checks.progressing_bound {
            checker.check_progressing_bound()?;
        }
        if checks.witness_bound {
            checker.check_witness_bound()?;
        }
        if checks.containment {
            checker.check_containment()?;
        }
        if checks.invariants {
            checker.check_invariants(samples, seed)?;
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        checker.skip(e.to_string());
    }
    checker.finish()
}

/// Runs `checks` over every graph of `spec` at every radius. Results are
/// ordered by graph then radius regardless of worker completion order.
pub fn run_corpus(spec: &CorpusSpec, checks: CheckSelection) -> Result<CheckReport, CorpusError> {
    run_corpus_with(spec, checks, Bounds::default())
}

pub fn run_corpus_with(spec: &CorpusSpec, checks: CheckSelection, bounds: Bounds) -> Result<CheckReport, CorpusError> {
    let radii = spec
        .radii
        .iter()
        .map(|&r| Radius::new(r))
        .collect::<Result<Vec<_>, _>>()?;
    if radii.is_empty() && !spec.entries.is_empty() {
        return Err(CorpusError::NoRadius);
    }
    let graphs = spec.expand()?;
    let jobs: Vec<(usize, &CorpusGraph, Radius)> = graphs
        .iter()
        .enumerate()
        .flat_map(|(i, g)| radii.iter().map(move |&r| (i, g, r)))
        .collect();
    let results: Vec<GraphResult> = jobs
        .par_iter()
        .map(|&(i, item, r)| {
            let mut config = EngineConfig::new(r);
            config.vertex_limit = spec.vertex_limit;
            let seed = spec.seed.wrapping_add((i as u64) << 8).wrapping_add(r.get() as u64);
            check_graph(item, config, checks, spec.invariant_samples, seed, bounds)
        })
        .collect();
    let violations: Vec<Violation> = results.iter().flat_map(|r| r.violations.iter().cloned()).collect();
    Ok(CheckReport {
        spec: ReportSpec {
            version: REPORT_VERSION,
            corpus: spec.clone(),
            checks,
        },
        pass: violations.is_empty(),
        results,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn item(id: &str, n: usize, edges: &[(usize, usize)]) -> CorpusGraph {
        CorpusGraph {
            id: id.into(),
            graph: Arc::new(Graph::from_edges(n, edges.iter().copied()).unwrap()),
        }
    }

    fn cfg(r: u32) -> EngineConfig {
        EngineConfig::new(Radius::new(r).unwrap())
    }

    const K3: [(usize, usize); 3] = [(0, 1), (1, 2), (0, 2)];
    const P5: [(usize, usize); 4] = [(0, 1), (1, 2), (2, 3), (3, 4)];

    fn run(it: &CorpusGraph, r: u32) -> GraphResult {
        check_graph(it, cfg(r), CheckSelection::default(), 10, 1, Bounds::default())
    }

    #[test]
    fn progressing_bound_examples() {
        let k1 = run(&item("k1", 1, &[]), 1);
        assert_eq!(k1.progressing_counts, vec![1]);
        assert_eq!(k1.bound_g.as_deref(), Some("1"));
        assert!(k1.passed());

        let k3 = run(&item("k3", 3, &K3), 1);
        assert_eq!(k3.progressing_counts, vec![3, 3, 3]);
        assert_eq!(k3.bound_g.as_deref(), Some("27"));
        assert!(k3.passed());

        let p5 = run(&item("p5", 5, &P5), 1);
        assert_eq!(p5.rank, Some(2));
        assert!(p5.progressing_counts.iter().all(|&c| c <= 3));
        assert!(p5.passed());
    }

    #[test]
    fn witness_bound_examples() {
        let k1 = run(&item("k1", 1, &[]), 1);
        assert_eq!(k1.witness_size, Some(1));
        let k3 = run(&item("k3", 3, &K3), 1);
        assert_eq!(k3.witness_size, Some(3));
        assert_eq!(k3.bound_f.as_deref(), Some("13"));
        let g = generate(&Family::Gnp { n: 10, p: 0.3, seed: 5 }).unwrap();
        let res = run(
            &CorpusGraph {
                id: "gnp".into(),
                graph: Arc::new(g),
            },
            2,
        );
        assert!(res.passed(), "{:?}", res.violations);
        assert!(res.skipped.is_none());
    }

    #[test]
    fn containment_examples() {
        let p3 = run(&item("p3", 3, &P5[..2]), 1);
        assert!(p3.passed());
        assert_eq!(p3.ball_witness_sizes.len(), 3);
        let k3 = run(&item("k3", 3, &K3), 1);
        assert_eq!(k3.ball_witness_sizes, vec![3, 3, 3]);
    }

    #[test]
    fn invariants_examples() {
        let two = item("two-comp", 5, &[(0, 1), (2, 3), (3, 4), (2, 4)]);
        let res = run(&two, 1);
        assert_eq!(res.rank, Some(3));
        assert!(res.passed());
        let tally = res.invariants.unwrap();
        assert_eq!(tally.monotonicity, 10);
        assert_eq!(tally.sandwich, 10);
        assert!(tally.dichotomy > 0);

        let edgeless = run(&item("e5", 5, &[]), 1);
        assert_eq!(edgeless.rank, Some(1));
        assert!(edgeless.passed());
    }

    #[test]
    fn mutated_bound_is_caught() {
        fn g_minus_one(k: usize, r: Radius) -> BigUint {
            bound_g(k, r) - 1u32
        }
        let bounds = Bounds {
            f: bound_f,
            g: g_minus_one,
        };
        let res = check_graph(&item("k1", 1, &[]), cfg(1), CheckSelection::default(), 2, 0, bounds);
        assert!(!res.passed());
        assert_eq!(res.violations[0].check, "progressing_bound");
        assert_eq!(res.violations[0].graph, GraphJson { n: 1, edges: vec![] });
    }

    #[test]
    fn oversized_graphs_are_skipped() {
        let mut c = cfg(1);
        c.vertex_limit = 4;
        let res = check_graph(
            &item("p5", 5, &P5),
            c,
            CheckSelection::default(),
            1,
            0,
            Bounds::default(),
        );
        assert!(res.skipped.is_some());
        assert!(res.passed());
    }

    #[test]
    fn empty_corpus_passes() {
        let spec = CorpusSpec::new("empty", &[], vec![]);
        let report = run_corpus(&spec, CheckSelection::default()).unwrap();
        assert!(report.pass);
        assert!(report.results.is_empty());
        let json = serde_json::to_value(&report).unwrap();
        for key in ["spec", "results", "violations", "pass"] {
            assert!(json.get(key).is_some());
        }
    }

    #[test]
    fn gnp_batch_layout() {
        let fams = gnp_batch(300, 6, 9, &[0.2, 0.4, 0.6], 0).unwrap();
        assert_eq!(fams.len(), 300);
        assert_eq!(fams[0], Family::Gnp { n: 6, p: 0.2, seed: 0 });
        assert_eq!(fams[5], Family::Gnp { n: 7, p: 0.4, seed: 5 });
        let combos: std::collections::BTreeSet<(usize, u64)> = fams
            .iter()
            .map(|f| match *f {
                Family::Gnp { n, p, .. } => (n, (p * 10.0) as u64),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(combos.len(), 12);
    }

    #[test]
    fn descriptor_round_trips_through_json() {
        let spec = CorpusSpec::acceptance(&[1, 2]);
        let text = serde_json::to_string(&spec).unwrap();
        let back: CorpusSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        let parsed: CorpusSpec = serde_json::from_str(
            r#"{"name":"x","radii":[1],"entries":[{"kind":"all_labeled","max_n":2},{"kind":"family","family":"path","params":{"n":3}},{"kind":"graph","id":"k2","graph":{"n":2,"edges":[[0,1]]}}]}"#,
        )
        .unwrap();
        let graphs = parsed.expand().unwrap();
        assert_eq!(graphs.len(), 1 + 2 + 1 + 1);
        assert_eq!(graphs[3].id, "path(n=3)");
    }

    #[test]
    fn small_exhaustive_run_is_deterministic() {
        let spec = CorpusSpec::all_labeled(3, &[1, 2]);
        let a = run_corpus(&spec, CheckSelection::default()).unwrap();
        let b = run_corpus(&spec, CheckSelection::default()).unwrap();
        assert!(a.pass);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.results.len(), (1 + 2 + 8) * 2);
    }
}
