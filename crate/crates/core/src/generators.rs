//! Deterministic graph families and seeded random graphs.
//!
//! Random families draw from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `SeedableRng::seed_from_u64(seed)`. `gnp` visits the pairs `u < v` in
//! lexicographic order and keeps each with `random_bool(p)`; `random_tree`
//! attaches vertex `v = 1..n` to a parent drawn by `random_range(0..v)`.
//!
//! Vertex layouts: paths and cycles are numbered along the walk, stars put
//! the center at 0, grids use `row * cols + col`, balanced trees are numbered
//! breadth-first, and the `s`-subdivided clique `K_t` keeps the original
//! vertices at `0..t` and appends `s` inner vertices per edge `(i, j)`, edges
//! in lexicographic order, inner vertices ordered from `i` towards `j`.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// Largest `n` accepted by [`all_labeled_graphs`].
pub const MAX_LABELED_N: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("{family}: missing parameter {param:?}")]
    MissingParam { family: String, param: &'static str },
    #[error("{family}: unexpected parameter {param:?}")]
    UnexpectedParam { family: String, param: String },
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("malformed generator spec {0:?}")]
    Malformed(String),
    #[error("labeled enumeration supports n <= {MAX_LABELED_N}, got {0}")]
    TooLarge(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    /// `n` vertices: center 0 and `n - 1` leaves.
    Star {
        n: usize,
    },
    Complete {
        n: usize,
    },
    Grid {
        rows: usize,
        cols: usize,
    },
    BalancedTree {
        branching: usize,
        height: usize,
    },
    SubdividedClique {
        t: usize,
        s: usize,
    },
    Gnp {
        n: usize,
        p: f64,
        seed: u64,
    },
    RandomTree {
        n: usize,
        seed: u64,
    },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Path { .. } => "path",
            Family::Cycle { .. } => "cycle",
            Family::Star { .. } => "star",
            Family::Complete { .. } => "complete",
            Family::Grid { .. } => "grid",
            Family::BalancedTree { .. } => "balanced_tree",
            Family::SubdividedClique { .. } => "subdivided_clique",
            Family::Gnp { .. } => "gnp",
            Family::RandomTree { .. } => "random_tree",
        }
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Family::Path { n }
            | Family::Cycle { n }
            | Family::Star { n }
            | Family::Complete { n }
            | Family::RandomTree { n, .. } => vec![("n", n as f64)],
            Family::Grid { rows, cols } => vec![("rows", rows as f64), ("cols", cols as f64)],
            Family::BalancedTree { branching, height } => {
                vec![("branching", branching as f64), ("height", height as f64)]
            }
            Family::SubdividedClique { t, s } => vec![("t", t as f64), ("s", s as f64)],
            Family::Gnp { n, p, .. } => vec![("n", n as f64), ("p", p)],
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match *self {
            Family::Gnp { seed, .. } | Family::RandomTree { seed, .. } => Some(seed),
            _ => None,
        }
    }

    /// JSON form `{"family": ..., "params": {...}, "seed": ...}`.
    pub fn to_spec(&self) -> FamilySpec {
        FamilySpec {
            family: self.name().to_string(),
            params: self.params().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            seed: self.seed(),
        }
    }

    /// Parses `family=<name>,key=value,...`; `seed` may appear as a key.
    pub fn parse_inline(text: &str, default_seed: Option<u64>) -> Result<Family, GenError> {
        let mut family = None;
        let mut params = BTreeMap::new();
        let mut seed = default_seed;
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| GenError::Malformed(text.to_string()))?;
            match key.trim() {
                "family" => family = Some(value.trim().to_string()),
                "seed" => {
                    seed = Some(
                        value
                            .trim()
                            .parse()
                            .map_err(|_| GenError::Invalid(format!("seed {value:?}")))?,
                    )
                }
                k => {
                    let v: f64 = value
                        .trim()
                        .parse()
                        .map_err(|_| GenError::Invalid(format!("{k} = {value:?}")))?;
                    params.insert(k.to_string(), v);
                }
            }
        }
        let family = family.ok_or_else(|| GenError::Malformed(text.to_string()))?;
        FamilySpec { family, params, seed }.to_family()
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name())?;
        for (i, (k, v)) in self.params().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}={v}")?;
        }
        if let Some(seed) = self.seed() {
            write!(f, ",seed={seed}")?;
        }
        f.write_str(")")
    }
}

/// Loose serialized form of a [`Family`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl FamilySpec {
    pub fn to_family(&self) -> Result<Family, GenError> {
        let name = self.family.as_str();
        let allowed: &[&'static str] = match name {
            "path" | "cycle" | "star" | "complete" | "random_tree" => &["n"],
            "grid" => &["rows", "cols"],
            "balanced_tree" => &["branching", "height"],
            "subdivided_clique" => &["t", "s"],
            "gnp" => &["n", "p"],
            _ => return Err(GenError::UnknownFamily(self.family.clone())),
        };
        if let Some(extra) = self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(GenError::UnexpectedParam {
                family: self.family.clone(),
                param: extra.clone(),
            });
        }
        let real = |param: &'static str| -> Result<f64, GenError> {
            self.params.get(param).copied().ok_or_else(|| GenError::MissingParam {
                family: self.family.clone(),
                param,
            })
        };
        let count = |param: &'static str| -> Result<usize, GenError> {
            let v = real(param)?;
            if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
                return Err(GenError::Invalid(format!(
                    "{name}: {param} must be a non-negative integer, got {v}"
                )));
            }
            Ok(v as usize)
        };
        let seed = || -> Result<u64, GenError> {
            self.seed
                .ok_or_else(|| GenError::Invalid(format!("{name} needs a seed")))
        };
        let family = match name {
            "path" => Family::Path { n: count("n")? },
            "cycle" => Family::Cycle { n: count("n")? },
            "star" => Family::Star { n: count("n")? },
            "complete" => Family::Complete { n: count("n")? },
            "grid" => Family::Grid {
                rows: count("rows")?,
                cols: count("cols")?,
            },
            "balanced_tree" => Family::BalancedTree {
                branching: count("branching")?,
                height: count("height")?,
            },
            "subdivided_clique" => Family::SubdividedClique {
                t: count("t")?,
                s: count("s")?,
            },
            "gnp" => Family::Gnp {
                n: count("n")?,
                p: real("p")?,
                seed: seed()?,
            },
            "random_tree" => Family::RandomTree {
                n: count("n")?,
                seed: seed()?,
            },
            _ => unreachable!(),
        };
        validate(&family)?;
        Ok(family)
    }
}

fn validate(family: &Family) -> Result<(), GenError> {
    let bad = |msg: String| Err(GenError::Invalid(msg));
    match *family {
        Family::Cycle { n } if n < 3 => bad(format!("cycle needs n >= 3, got {n}")),
        Family::Star { n } if n < 1 => bad("star needs n >= 1".into()),
        Family::SubdividedClique { t, .. } if t < 1 => bad(format!("subdivided_clique needs t >= 1, got {t}")),
        Family::BalancedTree { branching, height } if branching < 1 || height > 30 => bad(format!(
            "balanced_tree needs branching >= 1 and height <= 30, got {branching}, {height}"
        )),
        Family::Gnp { p, .. } if !(0.0..=1.0).contains(&p) => bad(format!("gnp needs p in [0, 1], got {p}")),
        _ => Ok(()),
    }
}

fn build(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
    Graph::from_edges(n, edges).expect("generated edges are simple")
}

pub fn generate(family: &Family) -> Result<Graph, GenError> {
    validate(family)?;
    Ok(match *family {
        Family::Path { n } => build(n, (1..n).map(|i| (i - 1, i))),
        Family::Cycle { n } => build(n, (0..n).map(|i| (i, (i + 1) % n))),
        Family::Star { n } => build(n, (1..n).map(|i| (0, i))),
        Family::Complete { n } => build(n, pairs(n)),
        Family::Grid { rows, cols } => {
            let id = |i: usize, j: usize| i * cols + j;
            let mut edges = Vec::new();
            for i in 0..rows {
                for j in 0..cols {
                    if j + 1 < cols {
                        edges.push((id(i, j), id(i, j + 1)));
                    }
                    if i + 1 < rows {
                        edges.push((id(i, j), id(i + 1, j)));
                    }
                }
            }
            build(rows * cols, edges)
        }
        Family::BalancedTree { branching, height } => {
            let mut n = 1usize;
            let mut level = 1usize;
            for _ in 0..height {
                level = level.saturating_mul(branching);
                n = n.saturating_add(level);
            }
            if n > 1 << 20 {
                return Err(GenError::Invalid(format!("balanced_tree with {n} vertices")));
            }
            build(n, (1..n).map(|v| ((v - 1) / branching, v)))
        }
        Family::SubdividedClique { t, s } => {
            let mut n = t;
            let mut edges = Vec::new();
            for (i, j) in pairs(t) {
                let mut prev = i;
                for _ in 0..s {
                    edges.push((prev, n));
                    prev = n;
                    n += 1;
                }
                edges.push((prev, j));
            }
            build(n, edges)
        }
        Family::Gnp { n, p, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let edges: Vec<_> = pairs(n).filter(|_| rng.random_bool(p)).collect();
            build(n, edges)
        }
        Family::RandomTree { n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let edges: Vec<_> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
            build(n, edges)
        }
    })
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
}

/// Every labeled graph on `n` vertices. Graph `i` contains pair number `b`
/// (pairs `u < v` in lexicographic order) exactly when bit `b` of `i` is set.
pub fn all_labeled_graphs(n: usize) -> Result<impl Iterator<Item = Graph>, GenError> {
    if n > MAX_LABELED_N {
        return Err(GenError::TooLarge(n));
    }
    let all: Vec<(usize, usize)> = pairs(n).collect();
    let count = 1u64 << all.len();
    Ok((0..count).map(move |mask| {
        build(
            n,
            all.iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &e)| e),
        )
    }))
}
