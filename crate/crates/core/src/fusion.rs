//! Cross-prime fusion of unipotent ℓ-blocks.
//!
//! Two labels fuse when they share an ℓ-block for some good odd prime ℓ not
//! dividing `q`. For such ℓ the blocks are the d-series with `d` the order of
//! `q` mod ℓ, so the closure is the join of the d-series partitions over all
//! admissible `d`. Only this mechanism is modelled: a class count above one
//! means "inconclusive for this engine", never that the labels are separated
//! by other means.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::arith::{admissible_d, Family, GroupTypeTag, PrimePower};
use crate::error::{Error, Result};
use crate::partitions::{d_core, ennola_dual};
use crate::unipotent::{Classical, Payload, SeriesSource, UnipotentLabel};

/// Index-based union-find. Unions attach the larger root under the smaller,
/// so roots are always the least index of their class.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns whether two distinct classes were merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Classes as sorted index lists, ordered by least member.
    pub fn classes(&mut self) -> Vec<Vec<usize>> {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.parent.len() {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
        }
        by_root.into_values().collect()
    }
}

/// One effective union in a fusion closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MergeEvent {
    pub a: String,
    pub b: String,
    pub d: u32,
    pub ell: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FusionResult {
    #[serde(rename = "type")]
    pub ty: String,
    pub q: u64,
    pub d_max: u32,
    /// Admissible `d` with its witnessing prime.
    pub admissible: BTreeMap<u32, u64>,
    pub label_count: usize,
    pub class_count: usize,
    pub classes: Vec<Vec<String>>,
    pub certificate: Vec<MergeEvent>,
    /// Set when degenerate D-symbols are present; their two labels are
    /// never separated.
    pub degenerate_labels: bool,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    SingleClass,
    /// More than one class; good odd primes alone do not fuse everything.
    InconclusiveByThisEngine,
}

pub fn default_d_max(ty: GroupTypeTag) -> u32 {
    2 * (ty.rank + 1)
}

pub fn fusion_closure(ty: GroupTypeTag, q: PrimePower, d_max: u32) -> Result<FusionResult> {
    fusion_closure_from(&Classical(ty), q, d_max)
}

pub fn fusion_closure_from(source: &dyn SeriesSource, q: PrimePower, d_max: u32) -> Result<FusionResult> {
    if d_max == 0 {
        return Err(Error::InvalidArgument("d_max must be at least 1".into()));
    }
    let ty = source.type_tag();
    let labels = source.labels()?;
    let names: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
    let index: BTreeMap<&UnipotentLabel, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let admissible = admissible_d(ty, q, d_max)?;

    let mut uf = UnionFind::new(labels.len());
    let mut certificate = Vec::new();
    for (&d, &ell) in &admissible {
        for block in source.d_series(d)?.blocks {
            let first = index[&block.members[0]];
            for m in &block.members[1..] {
                let other = index[m];
                if uf.union(first, other) {
                    certificate.push(MergeEvent {
                        a: names[first].clone(),
                        b: names[other].clone(),
                        d,
                        ell,
                    });
                }
            }
        }
    }
    let classes: Vec<Vec<String>> = uf
        .classes()
        .into_iter()
        .map(|c| c.into_iter().map(|i| names[i].clone()).collect())
        .collect();
    let degenerate_labels = labels
        .iter()
        .any(|l| matches!(l.payload, Payload::Symbol { marker: Some(_), .. }));
    let verdict = if classes.len() <= 1 {
        Verdict::SingleClass
    } else {
        Verdict::InconclusiveByThisEngine
    };
    Ok(FusionResult {
        ty: ty.to_string(),
        q: q.q(),
        d_max,
        admissible,
        label_count: labels.len(),
        class_count: classes.len(),
        classes,
        certificate,
        degenerate_labels,
        verdict,
    })
}

/// Replays a certificate on the discrete partition of `labels`.
pub fn replay_certificate(labels: &[String], certificate: &[MergeEvent]) -> Result<Vec<Vec<String>>> {
    let index: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let mut uf = UnionFind::new(labels.len());
    for ev in certificate {
        let (a, b) = match (index.get(ev.a.as_str()), index.get(ev.b.as_str())) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return Err(Error::Invariant(format!("certificate names unknown label in {ev:?}"))),
        };
        uf.union(a, b);
    }
    Ok(uf
        .classes()
        .into_iter()
        .map(|c| c.into_iter().map(|i| labels[i].clone()).collect())
        .collect())
}

/// Outcome of joining the d-series partitions for every `d` in a set.
#[derive(Debug, Clone, Serialize)]
pub struct DSeriesCheck {
    #[serde(rename = "type")]
    pub ty: String,
    pub d_set: Vec<u32>,
    pub single: bool,
    pub classes: Vec<Vec<String>>,
}

/// Whether the whole label set is one D-series: the finest partition that
/// is a union of d-series for every `d` in `d_set` has one class.
pub fn is_single_d_series(ty: GroupTypeTag, d_set: &BTreeSet<u32>) -> Result<DSeriesCheck> {
    is_single_d_series_from(&Classical(ty), d_set)
}

pub fn is_single_d_series_from(source: &dyn SeriesSource, d_set: &BTreeSet<u32>) -> Result<DSeriesCheck> {
    if d_set.is_empty() {
        return Err(Error::InvalidArgument("the set of d must be non-empty".into()));
    }
    let labels = source.labels()?;
    let index: BTreeMap<&UnipotentLabel, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut uf = UnionFind::new(labels.len());
    for &d in d_set {
        for block in source.d_series(d)?.blocks {
            let first = index[&block.members[0]];
            for m in &block.members[1..] {
                uf.union(first, index[m]);
            }
        }
    }
    let classes: Vec<Vec<String>> = uf
        .classes()
        .into_iter()
        .map(|c| c.into_iter().map(|i| labels[i].to_string()).collect())
        .collect();
    Ok(DSeriesCheck {
        ty: source.type_tag().to_string(),
        d_set: d_set.iter().copied().collect(),
        single: classes.len() == 1,
        classes,
    })
}

/// The 1-series of a classical type other than A, keyed by core, with the
/// defect of each.
///
/// For ²A the 1-series are the fibres of the 2-core, a staircase whose
/// index is its defect; for symbols it is the defect of the 1-hook core.
pub fn one_series_defects(ty: GroupTypeTag) -> Result<BTreeMap<String, u32>> {
    let labels = Classical(ty).labels()?;
    let mut out = BTreeMap::new();
    for l in &labels {
        let (core, k) = match (&l.payload, ty.family) {
            (Payload::Partition(p), Family::TwoA) => {
                let core = d_core(p, ennola_dual(1));
                let k = core
                    .staircase_index()
                    .ok_or_else(|| Error::Invariant(format!("2-core {core} is not a staircase")))?;
                (core.to_string(), k)
            }
            (Payload::Symbol { symbol, .. }, _) => {
                let core = symbol.hook_core(1);
                (core.to_string(), core.defect())
            }
            _ => {
                return Err(Error::NotSupported(format!(
                    "{ty}: the unipotent characters form a single 1-series; no defect bound applies"
                )))
            }
        };
        out.insert(core, k);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct DefectBoundRow {
    pub core: String,
    pub defect: u32,
    /// The bound as an inequality, e.g. `k(k+1)/2 <= n+1`.
    pub bound: String,
    pub lhs: String,
    pub rhs: i64,
    pub satisfied: bool,
}

fn bound_row(family: Family, n: u32, core: String, k: u32) -> DefectBoundRow {
    let (k, n) = (k as i64, n as i64);
    // Compare 4 * lhs with 4 * rhs to stay in integers.
    let (bound, lhs4, rhs4, lhs) = match family {
        Family::TwoA => ("k(k+1)/2 <= n+1", 2 * k * (k + 1), 4 * (n + 1), format!("{}/2", k * (k + 1))),
        Family::B | Family::C => ("(k^2-1)/4 <= n", k * k - 1, 4 * n, format!("{}/4", k * k - 1)),
        _ => ("k^2/4 <= n", k * k, 4 * n, format!("{}/4", k * k)),
    };
    let rhs = match family {
        Family::TwoA => n + 1,
        _ => n,
    };
    DefectBoundRow {
        core,
        defect: k as u32,
        bound: bound.to_string(),
        lhs,
        rhs,
        satisfied: lhs4 <= rhs4,
    }
}

/// Every 1-series with its defect `k` and the size bound on `k`.
pub fn defect_bound_report(ty: GroupTypeTag) -> Result<Vec<DefectBoundRow>> {
    Ok(one_series_defects(ty)?
        .into_iter()
        .map(|(core, k)| bound_row(ty.family, ty.rank, core, k))
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct DerivedRow {
    pub core: String,
    pub defect: u32,
    pub inequality: String,
    pub lhs: String,
    pub rhs: i64,
    pub satisfied: bool,
    /// `bound_minus_slack` when the inequality follows from the defect bound
    /// by subtracting a large enough term; `direct` for the small-k cases
    /// where it is checked numerically.
    pub route: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct DerivedCheck {
    #[serde(rename = "type")]
    pub ty: String,
    pub holds: bool,
    pub rows: Vec<DerivedRow>,
}

/// Checks the inequality on 1-series defects that makes the label set a
/// single {1,6}-series (²A) or {1,4}-series (B, C, D, ²D).
pub fn derived_inequality_check(ty: GroupTypeTag) -> Result<DerivedCheck> {
    let n = ty.rank as i64;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("{ty}: needs rank at least 2")));
    }
    let mut rows = Vec::new();
    for (core, k) in one_series_defects(ty)? {
        let k64 = k as i64;
        let (inequality, num, den, general_from) = match ty.family {
            Family::TwoA => ("(k^2-3k+2)/2 <= n-2", k64 * k64 - 3 * k64 + 2, 2, 2),
            Family::B | Family::C => ("(k^2-4k+3)/4 <= n-2", k64 * k64 - 4 * k64 + 3, 4, 3),
            _ => ("(k^2-4k+4)/4 <= n-2", k64 * k64 - 4 * k64 + 4, 4, 3),
        };
        rows.push(DerivedRow {
            core,
            defect: k,
            inequality: inequality.to_string(),
            lhs: format!("{num}/{den}"),
            rhs: n - 2,
            satisfied: num <= den * (n - 2),
            route: if k64 >= general_from { "bound_minus_slack" } else { "direct" },
        });
    }
    Ok(DerivedCheck {
        ty: ty.to_string(),
        holds: rows.iter().all(|r| r.satisfied),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(f: Family, n: u32) -> GroupTypeTag {
        GroupTypeTag::new(f, n).unwrap()
    }

    fn q(v: u64) -> PrimePower {
        PrimePower::new(v).unwrap()
    }

    fn set(ds: &[u32]) -> BTreeSet<u32> {
        ds.iter().copied().collect()
    }

    #[test]
    fn fusion_examples() {
        let a2 = fusion_closure(ty(Family::A, 2), q(2), 6).unwrap();
        assert_eq!(a2.class_count, 1);
        let used: BTreeSet<(u32, u64)> = a2.certificate.iter().map(|e| (e.d, e.ell)).collect();
        assert_eq!(used, [(2, 3), (3, 7)].into_iter().collect());

        let a1 = fusion_closure(ty(Family::A, 1), q(3), 6).unwrap();
        assert_eq!(a1.class_count, 2);
        assert_eq!(a1.verdict, Verdict::InconclusiveByThisEngine);

        let b2 = fusion_closure(ty(Family::B, 2), q(2), 4).unwrap();
        assert_eq!(b2.class_count, 1);
        let used: BTreeSet<(u32, u64)> = b2.certificate.iter().map(|e| (e.d, e.ell)).collect();
        assert_eq!(used, [(2, 3), (4, 5)].into_iter().collect());
    }

    #[test]
    fn d_series_examples() {
        assert!(is_single_d_series(ty(Family::TwoA, 5), &set(&[1, 6])).unwrap().single);
        assert!(is_single_d_series(ty(Family::B, 3), &set(&[2, 4])).unwrap().single);
        assert!(is_single_d_series(ty(Family::A, 2), &set(&[3])).unwrap().single);
        assert!(!is_single_d_series(ty(Family::A, 2), &set(&[2])).unwrap().single);
        assert!(is_single_d_series(ty(Family::A, 2), &BTreeSet::new()).is_err());
    }

    #[test]
    fn defect_bound_examples() {
        // Partitions of 4 have 2-core the empty staircase.
        let rows = defect_bound_report(ty(Family::TwoA, 3)).unwrap();
        assert_eq!(rows.iter().map(|r| r.defect).collect::<Vec<_>>(), vec![0]);
        let rows = defect_bound_report(ty(Family::TwoA, 2)).unwrap();
        let ks: BTreeSet<u32> = rows.iter().map(|r| r.defect).collect();
        assert_eq!(ks, [1, 2].into_iter().collect());
        for t in [ty(Family::TwoA, 3), ty(Family::B, 2), ty(Family::D, 2)] {
            assert!(defect_bound_report(t).unwrap().iter().all(|r| r.satisfied), "{t}");
        }
        let b2: BTreeSet<u32> = defect_bound_report(ty(Family::B, 2)).unwrap().iter().map(|r| r.defect).collect();
        assert_eq!(b2, [1, 3].into_iter().collect());
        assert!(matches!(defect_bound_report(ty(Family::A, 3)), Err(Error::NotSupported(_))));
    }

    #[test]
    fn derived_examples() {
        assert!(derived_inequality_check(ty(Family::TwoA, 5)).unwrap().holds);
        assert!(derived_inequality_check(ty(Family::B, 4)).unwrap().holds);
        assert!(derived_inequality_check(ty(Family::D, 3)).unwrap().holds);
        // D_2 = A_1 x A_1: its defect-0 series gives 1 <= 0.
        let d2 = derived_inequality_check(ty(Family::D, 2)).unwrap();
        assert!(!d2.holds);
        assert_eq!(d2.rows.iter().filter(|r| !r.satisfied).map(|r| r.defect).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn union_find_roots_are_minimal() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(4, 2));
        assert!(uf.union(3, 4));
        assert!(!uf.union(2, 3));
        assert_eq!(uf.classes(), vec![vec![0], vec![1], vec![2, 3, 4]]);
    }
}
