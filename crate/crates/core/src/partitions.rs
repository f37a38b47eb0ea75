//! Integer partitions, beta-sets, hook removal and cores.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on `m` for [`partitions_of`].
pub const DEFAULT_MAX_SIZE: u32 = 30;

/// Size bound for partition enumeration; `BLOCKATLAS_MAX_RANK` raises or
/// lowers it (a rank-`n` type of family A needs partitions of `n + 1`).
pub fn max_size() -> u32 {
    crate::env_max_rank().map_or(DEFAULT_MAX_SIZE, |r| r + 1)
}

/// A partition: weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `k` when this is the staircase `(k, k-1, ..., 1)`; the empty partition is `k = 0`.
    pub fn staircase_index(&self) -> Option<u32> {
        let k = self.0.len() as u32;
        self.0
            .iter()
            .enumerate()
            .all(|(i, &p)| p == k - i as u32)
            .then_some(k)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// A finite set of distinct non-negative integers encoding a partition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BetaSet(BTreeSet<u32>);

impl BetaSet {
    pub fn new(entries: impl IntoIterator<Item = u32>) -> Self {
        BetaSet(entries.into_iter().collect())
    }

    pub fn entries(&self) -> &BTreeSet<u32> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entries `x` that can slide down to `x - d`.
    pub fn hook_positions(&self, d: u32) -> Vec<u32> {
        self.0
            .iter()
            .copied()
            .filter(|&x| x >= d && !self.0.contains(&(x - d)))
            .collect()
    }

    pub fn slide(&self, from: u32, to: u32) -> BetaSet {
        let mut s = self.0.clone();
        s.remove(&from);
        s.insert(to);
        BetaSet(s)
    }
}

/// All partitions of `m` in decreasing lexicographic order.
pub fn partitions_of(m: u32) -> Result<Vec<Partition>> {
    let bound = max_size();
    if m > bound {
        return Err(Error::BoundExceeded {
            what: "partition size",
            value: m as u64,
            bound: bound as u64,
        });
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(m, m, &mut cur, &mut out);
    Ok(out)
}

fn fill(rest: u32, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition(cur.clone()));
        return;
    }
    for p in (1..=max_part.min(rest)).rev() {
        cur.push(p);
        fill(rest - p, p, cur, out);
        cur.pop();
    }
}

pub fn to_beta_set(lambda: &Partition, length: usize) -> Result<BetaSet> {
    if length < lambda.len() {
        return Err(Error::LengthTooShort {
            length,
            parts: lambda.len(),
        });
    }
    Ok(BetaSet::new((0..length).map(|i| {
        let part = lambda.0.get(i).copied().unwrap_or(0);
        part + (length - 1 - i) as u32
    })))
}

pub fn from_beta_set(beta: &BetaSet) -> Partition {
    let parts = beta
        .0
        .iter()
        .rev()
        .enumerate()
        .map(|(i, &x)| x - (beta.len() - 1 - i) as u32)
        .collect();
    Partition::new(parts)
}

/// Partitions reachable from `lambda` by removing one `d`-hook.
pub fn remove_hook(lambda: &Partition, d: u32) -> Vec<Partition> {
    let beta = to_beta_set(lambda, lambda.len()).expect("length equals part count");
    beta.hook_positions(d)
        .into_iter()
        .map(|x| from_beta_set(&beta.slide(x, x - d)))
        .collect()
}

/// The `d`-core, computed on the `d`-abacus: beads on each runner are pushed
/// as far up as they go.
pub fn d_core(lambda: &Partition, d: u32) -> Partition {
    assert!(d >= 1, "d must be positive");
    let beta = to_beta_set(lambda, lambda.len()).expect("length equals part count");
    let mut per_runner = vec![0u32; d as usize];
    for &x in beta.entries() {
        per_runner[(x % d) as usize] += 1;
    }
    let core = per_runner
        .iter()
        .enumerate()
        .flat_map(|(r, &n)| (0..n).map(move |k| r as u32 + k * d));
    from_beta_set(&BetaSet::new(core))
}

/// The involution on `d` induced by `q -> -q` on orders of roots of unity.
pub fn ennola_dual(d: u32) -> u32 {
    assert!(d >= 1, "d must be positive");
    match d % 4 {
        1 | 3 => 2 * d,
        2 => d / 2,
        _ => d,
    }
}
