//! Witness-size bounds.
//!
//! `f(1) = 1`, `f(k+1) = r f(k)^2 + r f(k) + 1` is the exact size bound the
//! witness construction meets. `g(1) = 1`, `g(k+1) = (2r+1) g(k)^2` dominates
//! it and has the closed form `g(k) = (2r+1)^(2^(k-1) - 1)`, which bounds the
//! number of progressing Splitter moves in a graph of rank `k`.

use num_bigint::BigUint;
use serde::Serialize;

use crate::graph::Radius;

/// `f(k)` by iterating the recurrence. Panics when `k == 0`.
pub fn bound_f(k: usize, r: Radius) -> BigUint {
    assert!(k >= 1, "bounds are defined for k >= 1");
    let r = BigUint::from(r.get());
    let mut f = BigUint::from(1u32);
    for _ in 1..k {
        f = &r * &f * &f + &r * &f + 1u32;
    }
    f
}

/// `g(k) = (2r+1)^(2^(k-1) - 1)`. Panics when `k == 0` or `k > 32`.
pub fn bound_g(k: usize, r: Radius) -> BigUint {
    assert!((1..=32).contains(&k), "closed form needs 1 <= k <= 32");
    let base = BigUint::from(2 * u64::from(r.get()) + 1);
    let exp = ((1u64 << (k - 1)) - 1) as u32;
    base.pow(exp)
}

/// `g(k)` by iterating `g(k+1) = (2r+1) g(k)^2` from `g(1) = 1`.
pub fn bound_g_recurrence(k: usize, r: Radius) -> BigUint {
    assert!(k >= 1, "bounds are defined for k >= 1");
    let base = BigUint::from(2 * u64::from(r.get()) + 1);
    let mut g = BigUint::from(1u32);
    for _ in 1..k {
        g = &base * &g * &g;
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub k: usize,
    #[serde(serialize_with = "decimal")]
    pub f: BigUint,
    #[serde(serialize_with = "decimal")]
    pub g: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundTable {
    pub radius: Radius,
    pub rows: Vec<BoundRow>,
}

impl BoundTable {
    /// Rows for `k = 1..=max_k`.
    pub fn new(r: Radius, max_k: usize) -> Self {
        let rows = (1..=max_k)
            .map(|k| BoundRow {
                k,
                f: bound_f(k, r),
                g: bound_g(k, r),
            })
            .collect();
        BoundTable { radius: r, rows }
    }

    /// Checks `f <= g` and recurrence/closed-form agreement of `g` on every
    /// row; returns the offending `k` values.
    pub fn disagreements(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|row| row.f > row.g || row.g != bound_g_recurrence(row.k, self.radius))
            .map(|row| row.k)
            .collect()
    }
}

fn decimal<S: serde::Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_str_radix(10))
}
