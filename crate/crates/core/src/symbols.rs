//! Lusztig symbols: rank, defect, hooks and cohooks, their cores, and the
//! parity-splitting involution `phi`.
//!
//! A [`Symbol`] is stored as an ordered pair of rows in reduced form (the rows
//! do not both contain 0). Most questions are about the unordered pair; use
//! [`Symbol::canonical`] or [`Symbol::same_class`] for those.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{partitions_of, to_beta_set, Partition};

/// Default bound on the rank passed to [`enumerate_symbols`].
pub const DEFAULT_MAX_RANK: u32 = 10;

pub fn max_rank() -> u32 {
    crate::env_max_rank().unwrap_or(DEFAULT_MAX_RANK)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol {
    s: Vec<u32>,
    t: Vec<u32>,
}

impl Symbol {
    /// Builds the reduced representative of `(s, t)`. Rows are deduplicated
    /// and sorted; their order is kept.
    pub fn new(s: impl IntoIterator<Item = u32>, t: impl IntoIterator<Item = u32>) -> Self {
        let s: BTreeSet<u32> = s.into_iter().collect();
        let t: BTreeSet<u32> = t.into_iter().collect();
        let mut sym = Symbol {
            s: s.into_iter().collect(),
            t: t.into_iter().collect(),
        };
        sym.reduce();
        sym
    }

    fn reduce(&mut self) {
        let mut shift = 0;
        while shift < self.s.len()
            && shift < self.t.len()
            && self.s[shift] == shift as u32
            && self.t[shift] == shift as u32
        {
            shift += 1;
        }
        if shift > 0 {
            let k = shift as u32;
            self.s = self.s[shift..].iter().map(|x| x - k).collect();
            self.t = self.t[shift..].iter().map(|x| x - k).collect();
        }
    }

    pub fn row_s(&self) -> &[u32] {
        &self.s
    }

    pub fn row_t(&self) -> &[u32] {
        &self.t
    }

    pub fn swapped(&self) -> Symbol {
        Symbol {
            s: self.t.clone(),
            t: self.s.clone(),
        }
    }

    /// Representative of the unordered pair: longer row first, ties broken by
    /// putting the lexicographically larger row first.
    pub fn canonical(&self) -> Symbol {
        let swap = match self.s.len().cmp(&self.t.len()) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => self.s < self.t,
        };
        if swap {
            self.swapped()
        } else {
            self.clone()
        }
    }

    pub fn same_class(&self, other: &Symbol) -> bool {
        self.canonical() == other.canonical()
    }

    /// Both rows equal; such a symbol labels two characters in type D.
    pub fn is_degenerate(&self) -> bool {
        self.s == self.t
    }

    pub fn rank(&self) -> u32 {
        let total: u32 = self.s.iter().chain(&self.t).sum();
        let m = (self.s.len() + self.t.len()) as u32;
        // floor(((m - 1) / 2)^2) = floor((m - 1)^2 / 4)
        let correction = if m == 0 { 0 } else { (m - 1) * (m - 1) / 4 };
        total - correction
    }

    pub fn defect(&self) -> u32 {
        self.s.len().abs_diff(self.t.len()) as u32
    }

    /// `{S_e ∪ T_o, T_e ∪ S_o}`, reduced but not reordered.
    pub fn phi(&self) -> Symbol {
        let even = |x: &&u32| (**x).is_multiple_of(2);
        let odd = |x: &&u32| **x % 2 == 1;
        let first = self.s.iter().filter(even).chain(self.t.iter().filter(odd)).copied();
        let second: Vec<u32> = self.t.iter().filter(even).chain(self.s.iter().filter(odd)).copied().collect();
        Symbol::new(first, second)
    }

    /// All symbols obtained by removing one `d`-hook (a slide `x -> x - d`
    /// inside one row).
    pub fn remove_hook(&self, d: u32) -> Vec<Symbol> {
        let mut out = Vec::new();
        for (row, other, first) in [(&self.s, &self.t, true), (&self.t, &self.s, false)] {
            for &x in row.iter().filter(|&&x| x >= d && !row.contains(&(x - d))) {
                let moved: Vec<u32> = row.iter().map(|&y| if y == x { x - d } else { y }).collect();
                out.push(if first {
                    Symbol::new(moved, other.clone())
                } else {
                    Symbol::new(other.clone(), moved)
                });
            }
        }
        out
    }

    /// All symbols obtained by removing one `d`-cohook (delete `x` from one
    /// row, insert `x - d` into the other).
    pub fn remove_cohook(&self, d: u32) -> Vec<Symbol> {
        let mut out = Vec::new();
        for (row, other, first) in [(&self.s, &self.t, true), (&self.t, &self.s, false)] {
            for &x in row.iter().filter(|&&x| x >= d && !other.contains(&(x - d))) {
                let shrunk = row.iter().copied().filter(|&y| y != x);
                let grown = other.iter().copied().chain(std::iter::once(x - d));
                out.push(if first {
                    Symbol::new(shrunk, grown)
                } else {
                    Symbol::new(grown, shrunk)
                });
            }
        }
        out
    }

    /// Canonical `d`-hook core.
    pub fn hook_core(&self, d: u32) -> Symbol {
        assert!(d >= 1, "d must be positive");
        let mut cur = self.clone();
        while let Some(next) = cur.remove_hook(d).into_iter().next() {
            cur = next;
        }
        cur.canonical()
    }

    /// Canonical `d`-cohook core.
    pub fn cohook_core(&self, d: u32) -> Symbol {
        assert!(d >= 1, "d must be positive");
        let mut cur = self.clone();
        while let Some(next) = cur.remove_cohook(d).into_iter().next() {
            cur = next;
        }
        cur.canonical()
    }

    fn sort_key(&self) -> (u32, u32, &[u32], &[u32]) {
        (self.rank(), self.defect(), &self.s, &self.t)
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn write_row(f: &mut fmt::Formatter<'_>, row: &[u32]) -> fmt::Result {
    f.write_str("{")?;
    for (i, x) in row.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("}")
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        write_row(f, &self.s)?;
        f.write_str(",")?;
        write_row(f, &self.t)?;
        f.write_str(")")
    }
}

/// Which defects to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DefectClass {
    Odd,
    ZeroMod4,
    TwoMod4,
    Even,
    Any,
}

impl DefectClass {
    pub fn contains(self, defect: u32) -> bool {
        match self {
            DefectClass::Odd => defect % 2 == 1,
            DefectClass::ZeroMod4 => defect.is_multiple_of(4),
            DefectClass::TwoMod4 => defect % 4 == 2,
            DefectClass::Even => defect.is_multiple_of(2),
            DefectClass::Any => true,
        }
    }
}

/// Rank of the defect-`e` symbol `({0, ..., e-1}, {})`: `floor(e^2 / 4)`.
pub fn cuspidal_rank(defect: u32) -> u32 {
    defect * defect / 4
}

/// Reduced symbols of rank `n` with defect in `class`, one canonical
/// representative per unordered class, in (rank, defect, rows) order.
///
/// Built from bipartitions: a defect-`e` symbol of rank `n` has rows
/// `(beta(alpha, L + e), beta(beta, L))` with `|alpha| + |beta| = n - floor(e^2/4)`.
pub fn enumerate_symbols(n: u32, class: DefectClass) -> Result<Vec<Symbol>> {
    let bound = max_rank();
    if n > bound {
        return Err(Error::BoundExceeded {
            what: "symbol rank",
            value: n as u64,
            bound: bound as u64,
        });
    }
    let mut found = BTreeSet::new();
    let mut e = 0;
    while cuspidal_rank(e) <= n {
        if class.contains(e) {
            let m = n - cuspidal_rank(e);
            for a in 0..=m {
                for alpha in partitions_of(a)? {
                    for beta in partitions_of(m - a)? {
                        let len = beta.len().max(alpha.len().saturating_sub(e as usize));
                        let sym = symbol_from_bipartition(&alpha, &beta, e, len);
                        if sym.rank() != n {
                            return Err(Error::Invariant(format!("{sym} does not have rank {n}")));
                        }
                        found.insert(sym.canonical());
                    }
                }
            }
        }
        e += 1;
    }
    let mut out: Vec<Symbol> = found.into_iter().collect();
    out.sort();
    Ok(out)
}

fn symbol_from_bipartition(alpha: &Partition, beta: &Partition, e: u32, len: usize) -> Symbol {
    let s = to_beta_set(alpha, len + e as usize).expect("length covers parts");
    let t = to_beta_set(beta, len).expect("length covers parts");
    Symbol::new(s.entries().iter().copied(), t.entries().iter().copied())
}
