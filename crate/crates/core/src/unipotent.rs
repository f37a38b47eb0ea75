//! Unipotent character labels of classical types and their partition into
//! d-series and ℓ-blocks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{is_good, is_prime, mult_order, Family, GroupTypeTag, PrimePower};
use crate::error::{Error, Result};
use crate::partitions::{d_core, ennola_dual, partitions_of, Partition};
use crate::symbols::{enumerate_symbols, DefectClass, Symbol};

pub mod external;

/// Marker distinguishing the two characters attached to a degenerate
/// symbol of type D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Marker {
    Prime,
    DoublePrime,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Payload {
    Partition(Partition),
    Symbol { symbol: Symbol, marker: Option<Marker> },
    /// Label supplied by an external data file.
    External(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnipotentLabel {
    pub ty: GroupTypeTag,
    pub payload: Payload,
}

impl fmt::Display for UnipotentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            Payload::Partition(p) => write!(f, "{p}"),
            Payload::Symbol { symbol, marker } => {
                write!(f, "{symbol}")?;
                match marker {
                    Some(Marker::Prime) => f.write_str("′"),
                    Some(Marker::DoublePrime) => f.write_str("″"),
                    None => Ok(()),
                }
            }
            Payload::External(s) => f.write_str(s),
        }
    }
}

impl Serialize for SeriesBlock {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("SeriesBlock", 2)?;
        st.serialize_field("core", &self.core_key)?;
        let members: Vec<String> = self.members.iter().map(|l| l.to_string()).collect();
        st.serialize_field("members", &members)?;
        st.end()
    }
}

/// Defect class of the symbols labelling a classical family.
pub fn defect_class(family: Family) -> Option<DefectClass> {
    match family {
        Family::B | Family::C => Some(DefectClass::Odd),
        Family::D => Some(DefectClass::ZeroMod4),
        Family::TwoD => Some(DefectClass::TwoMod4),
        _ => None,
    }
}

/// Labels of the unipotent characters of `ty`, in canonical order.
pub fn enumerate(ty: GroupTypeTag) -> Result<Vec<UnipotentLabel>> {
    match ty.family {
        Family::A | Family::TwoA => Ok(partitions_of(ty.rank + 1)?
            .into_iter()
            .map(|p| UnipotentLabel {
                ty,
                payload: Payload::Partition(p),
            })
            .collect()),
        fam if fam.is_classical() => {
            let class = defect_class(fam).expect("classical symbol family");
            let mut out = Vec::new();
            for symbol in enumerate_symbols(ty.rank, class)? {
                if symbol.is_degenerate() {
                    for m in [Marker::Prime, Marker::DoublePrime] {
                        out.push(UnipotentLabel {
                            ty,
                            payload: Payload::Symbol {
                                symbol: symbol.clone(),
                                marker: Some(m),
                            },
                        });
                    }
                } else {
                    out.push(UnipotentLabel {
                        ty,
                        payload: Payload::Symbol { symbol, marker: None },
                    });
                }
            }
            Ok(out)
        }
        fam => Err(Error::NotSupported(format!(
            "{fam} has no built-in unipotent data; load an external data file"
        ))),
    }
}

/// Core invariant whose fibers are the d-series of a classical type.
pub fn series_core(label: &UnipotentLabel, d: u32) -> Result<String> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    match (&label.payload, label.ty.family) {
        (Payload::Partition(p), Family::A) => Ok(d_core(p, d).to_string()),
        (Payload::Partition(p), Family::TwoA) => Ok(d_core(p, ennola_dual(d)).to_string()),
        (Payload::Symbol { symbol, .. }, _) => Ok(if d % 2 == 1 {
            symbol.hook_core(d).to_string()
        } else {
            symbol.cohook_core(d / 2).to_string()
        }),
        _ => Err(Error::NotSupported(format!("no series rule for label {label}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesContext {
    #[serde(rename = "type")]
    pub ty: String,
    pub d: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesBlock {
    pub core_key: String,
    pub members: Vec<UnipotentLabel>,
}

/// A partition of a label set into d-series (or ℓ-blocks), keyed by core.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesPartition {
    pub context: SeriesContext,
    pub blocks: Vec<SeriesBlock>,
}

impl SeriesPartition {
    /// Groups `labels` by `key`; blocks appear in order of their first member.
    pub fn group_by(
        context: SeriesContext,
        labels: &[UnipotentLabel],
        mut key: impl FnMut(&UnipotentLabel) -> Result<String>,
    ) -> Result<Self> {
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut blocks: Vec<SeriesBlock> = Vec::new();
        for label in labels {
            let k = key(label)?;
            let slot = *index.entry(k.clone()).or_insert_with(|| {
                blocks.push(SeriesBlock {
                    core_key: k,
                    members: Vec::new(),
                });
                blocks.len() - 1
            });
            blocks[slot].members.push(label.clone());
        }
        Ok(SeriesPartition { context, blocks })
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_single(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Checks disjointness, coverage of `labels`, and that each member's
    /// recomputed key equals its block key.
    pub fn validate(
        &self,
        labels: &[UnipotentLabel],
        mut key: impl FnMut(&UnipotentLabel) -> Result<String>,
    ) -> Result<()> {
        let mut seen = BTreeSet::new();
        let mut keys = BTreeSet::new();
        for block in &self.blocks {
            if !keys.insert(&block.core_key) {
                return Err(Error::Invariant(format!("duplicate block key {}", block.core_key)));
            }
            for m in &block.members {
                if !seen.insert(m) {
                    return Err(Error::Invariant(format!("label {m} appears twice")));
                }
                if key(m)? != block.core_key {
                    return Err(Error::Invariant(format!("label {m} is not in block {}", block.core_key)));
                }
            }
        }
        let all: BTreeSet<&UnipotentLabel> = labels.iter().collect();
        if all != seen {
            return Err(Error::Invariant("series blocks do not cover the label set".into()));
        }
        Ok(())
    }
}

/// A provider of labels and d-series partitions; implemented by the
/// classical combinatorics and by externally loaded data.
pub trait SeriesSource: Sync {
    fn type_tag(&self) -> GroupTypeTag;
    fn labels(&self) -> Result<Vec<UnipotentLabel>>;
    fn d_series(&self, d: u32) -> Result<SeriesPartition>;
}

/// The built-in source for the classical families.
#[derive(Debug, Clone, Copy)]
pub struct Classical(pub GroupTypeTag);

impl SeriesSource for Classical {
    fn type_tag(&self) -> GroupTypeTag {
        self.0
    }

    fn labels(&self) -> Result<Vec<UnipotentLabel>> {
        enumerate(self.0)
    }

    fn d_series(&self, d: u32) -> Result<SeriesPartition> {
        d_series(self.0, d)
    }
}

pub fn d_series(ty: GroupTypeTag, d: u32) -> Result<SeriesPartition> {
    let labels = enumerate(ty)?;
    d_series_of(ty, &labels, d)
}

fn d_series_of(ty: GroupTypeTag, labels: &[UnipotentLabel], d: u32) -> Result<SeriesPartition> {
    let context = SeriesContext {
        ty: ty.to_string(),
        d,
        ell: None,
        q: None,
    };
    let part = SeriesPartition::group_by(context, labels, |l| series_core(l, d))?;
    part.validate(labels, |l| series_core(l, d))?;
    Ok(part)
}

/// Checks the hypotheses under which unipotent ℓ-blocks are d-series:
/// ℓ prime, odd, good for `ty`, and prime to `q`.
pub fn check_block_hypotheses(ty: GroupTypeTag, q: PrimePower, ell: u64) -> Result<u32> {
    if !is_prime(ell) {
        return Err(Error::BadPrimeHypothesis(format!("{ell} is not prime")));
    }
    if ell == 2 {
        return Err(Error::BadPrimeHypothesis("ℓ = 2 is not odd".into()));
    }
    if !is_good(ell, ty) {
        return Err(Error::BadPrimeHypothesis(format!("ℓ = {ell} is bad for {ty}")));
    }
    if ty.family == Family::ThreeD4 && ell == 3 {
        return Err(Error::BadPrimeHypothesis("ℓ = 3 is excluded for 3D4".into()));
    }
    if q.q().is_multiple_of(ell) {
        return Err(Error::BadPrimeHypothesis(format!("ℓ = {ell} divides q = {q}")));
    }
    Ok(mult_order(q.q(), ell)? as u32)
}

/// Unipotent ℓ-blocks: the d-series for `d` the order of `q` mod `ell`.
pub fn ell_blocks(ty: GroupTypeTag, q: PrimePower, ell: u64) -> Result<SeriesPartition> {
    ell_blocks_from(&Classical(ty), q, ell)
}

pub fn ell_blocks_from(source: &dyn SeriesSource, q: PrimePower, ell: u64) -> Result<SeriesPartition> {
    let d = check_block_hypotheses(source.type_tag(), q, ell)?;
    let mut part = source.d_series(d)?;
    part.context.ell = Some(ell);
    part.context.q = Some(q.q());
    Ok(part)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(f: Family, n: u32) -> GroupTypeTag {
        GroupTypeTag::new(f, n).unwrap()
    }

    fn rendered(part: &SeriesPartition) -> Vec<Vec<String>> {
        part.blocks
            .iter()
            .map(|b| b.members.iter().map(|m| m.to_string()).collect())
            .collect()
    }

    #[test]
    fn enumerate_examples() {
        let a1: Vec<String> = enumerate(ty(Family::A, 1)).unwrap().iter().map(|l| l.to_string()).collect();
        assert_eq!(a1, vec!["(2)", "(1,1)"]);
        assert_eq!(enumerate(ty(Family::B, 2)).unwrap().len(), 6);
        assert_eq!(enumerate(ty(Family::C, 2)).unwrap().len(), 6);
        let d2 = enumerate(ty(Family::D, 2)).unwrap();
        assert_eq!(d2.len(), 4);
        assert_eq!(
            d2.iter()
                .filter(|l| matches!(l.payload, Payload::Symbol { marker: Some(_), .. }))
                .count(),
            2
        );
        assert!(matches!(enumerate(ty(Family::G2, 2)), Err(Error::NotSupported(_))));
    }

    #[test]
    fn degenerate_labels_render_with_markers() {
        let d2 = enumerate(ty(Family::D, 2)).unwrap();
        let names: Vec<String> = d2.iter().map(|l| l.to_string()).collect();
        assert!(names.contains(&"({1},{1})′".to_string()));
        assert!(names.contains(&"({1},{1})″".to_string()));
    }

    #[test]
    fn d_series_examples() {
        let a2_2 = d_series(ty(Family::A, 2), 2).unwrap();
        assert_eq!(rendered(&a2_2), vec![vec!["(3)", "(1,1,1)"], vec!["(2,1)"]]);
        assert!(d_series(ty(Family::A, 2), 3).unwrap().is_single());
        assert!(d_series(ty(Family::B, 1), 1).unwrap().is_single());
    }

    #[test]
    fn ell_block_examples() {
        let q2 = PrimePower::new(2).unwrap();
        let q4 = PrimePower::new(4).unwrap();
        let blocks = ell_blocks(ty(Family::A, 2), q2, 7).unwrap();
        assert!(blocks.is_single());
        assert_eq!((blocks.context.d, blocks.context.ell), (3, Some(7)));

        let b2 = ell_blocks(ty(Family::B, 2), q4, 5).unwrap();
        assert_eq!(b2.context.d, 2);
        let by_cohook = SeriesPartition::group_by(b2.context.clone(), &enumerate(ty(Family::B, 2)).unwrap(), |l| {
            match &l.payload {
                Payload::Symbol { symbol, .. } => Ok(symbol.cohook_core(1).to_string()),
                _ => unreachable!(),
            }
        })
        .unwrap();
        assert_eq!(b2.blocks, by_cohook.blocks);

        assert!(matches!(
            ell_blocks(ty(Family::B, 2), q4, 2),
            Err(Error::BadPrimeHypothesis(_))
        ));
        assert!(matches!(
            ell_blocks(ty(Family::A, 2), PrimePower::new(9).unwrap(), 3),
            Err(Error::BadPrimeHypothesis(_))
        ));
    }

    #[test]
    fn single_series_facts() {
        for n in 1..=10 {
            assert!(d_series(ty(Family::A, n), 1).unwrap().is_single(), "A_{n}");
            assert!(d_series(ty(Family::TwoA, n), 2).unwrap().is_single(), "2A_{n}");
        }
    }

    #[test]
    fn series_respect_rank_modulo_d() {
        for fam in Family::CLASSICAL {
            for n in 2..=6 {
                let t = ty(fam, n);
                for d in 1..=8 {
                    for block in d_series(t, d).unwrap().blocks {
                        for m in &block.members {
                            match &m.payload {
                                Payload::Partition(p) => {
                                    let e = if fam == Family::TwoA { ennola_dual(d) } else { d };
                                    assert_eq!((p.size() - d_core(p, e).size()) % e, 0);
                                }
                                Payload::Symbol { symbol, .. } => {
                                    let step = if d % 2 == 1 { d } else { d / 2 };
                                    let core = if d % 2 == 1 {
                                        symbol.hook_core(d)
                                    } else {
                                        symbol.cohook_core(d / 2)
                                    };
                                    assert_eq!(symbol.rank(), n);
                                    assert_eq!((symbol.rank() - core.rank()) % step, 0);
                                }
                                Payload::External(_) => unreachable!(),
                            }
                        }
                    }
                }
            }
        }
    }
}
