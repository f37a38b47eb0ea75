//! Externally supplied unipotent data for the exceptional families.
//!
//! A data file lists, per type, the unipotent labels and for each `d` the
//! partition of those labels into d-series. Any `d` absent from the file is
//! read as the discrete partition (every character is d-cuspidal).

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use super::{Payload, SeriesContext, SeriesPartition, SeriesSource, UnipotentLabel};
use crate::arith::{Family, GroupTypeTag};
use crate::error::{Error, Result};

pub const SCHEMA: &str = "exceptional_v1";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileRepr {
    schema: String,
    types: Vec<TypeRepr>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct TypeRepr {
    family: Family,
    labels: Vec<String>,
    series: BTreeMap<String, Vec<Vec<String>>>,
}

/// Validated data for one exceptional type.
#[derive(Debug, Clone)]
pub struct ExternalSource {
    ty: GroupTypeTag,
    labels: Vec<String>,
    series: BTreeMap<u32, Vec<Vec<String>>>,
}

/// Parses and validates a data file.
pub fn load(text: &str) -> Result<Vec<ExternalSource>> {
    let repr: FileRepr = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if repr.schema != SCHEMA {
        return Err(Error::InvalidArgument(format!(
            "expected schema `{SCHEMA}`, found `{}`",
            repr.schema
        )));
    }
    let mut seen = BTreeSet::new();
    repr.types
        .into_iter()
        .map(|t| {
            if !seen.insert(t.family) {
                return Err(Error::InvalidArgument(format!("{} listed twice", t.family)));
            }
            ExternalSource::from_repr(t)
        })
        .collect()
}

impl ExternalSource {
    fn from_repr(t: TypeRepr) -> Result<Self> {
        let rank = t.family.exceptional_rank().ok_or_else(|| {
            Error::InvalidArgument(format!("{} is classical and has built-in data", t.family))
        })?;
        let ty = GroupTypeTag::new(t.family, rank)?;
        let all: BTreeSet<&String> = t.labels.iter().collect();
        if all.len() != t.labels.len() {
            return Err(Error::InvalidArgument(format!("{ty}: duplicate labels")));
        }
        let mut series = BTreeMap::new();
        for (key, blocks) in t.series {
            let d: u32 = key
                .parse()
                .ok()
                .filter(|&d| d >= 1)
                .ok_or_else(|| Error::InvalidArgument(format!("{ty}: series key `{key}` is not a positive integer")))?;
            let mut covered = BTreeSet::new();
            for m in blocks.iter().flatten() {
                if !all.contains(m) {
                    return Err(Error::InvalidArgument(format!("{ty}, d = {d}: unknown label `{m}`")));
                }
                if !covered.insert(m) {
                    return Err(Error::InvalidArgument(format!("{ty}, d = {d}: label `{m}` repeated")));
                }
            }
            if covered.len() != all.len() || blocks.iter().any(|b| b.is_empty()) {
                return Err(Error::InvalidArgument(format!(
                    "{ty}, d = {d}: series do not partition the labels"
                )));
            }
            series.insert(d, blocks);
        }
        Ok(ExternalSource {
            ty,
            labels: t.labels,
            series,
        })
    }

    fn label(&self, name: &str) -> UnipotentLabel {
        UnipotentLabel {
            ty: self.ty,
            payload: Payload::External(name.to_string()),
        }
    }

    fn block_of(&self, d: u32) -> BTreeMap<&str, usize> {
        let mut out = BTreeMap::new();
        match self.series.get(&d) {
            Some(blocks) => {
                for (i, b) in blocks.iter().enumerate() {
                    for m in b {
                        out.insert(m.as_str(), i);
                    }
                }
            }
            None => {
                for (i, m) in self.labels.iter().enumerate() {
                    out.insert(m.as_str(), i);
                }
            }
        }
        out
    }
}

impl SeriesSource for ExternalSource {
    fn type_tag(&self) -> GroupTypeTag {
        self.ty
    }

    fn labels(&self) -> Result<Vec<UnipotentLabel>> {
        Ok(self.labels.iter().map(|l| self.label(l)).collect())
    }

    fn d_series(&self, d: u32) -> Result<SeriesPartition> {
        let block_of = self.block_of(d);
        let key = |l: &UnipotentLabel| match &l.payload {
            Payload::External(name) => block_of
                .get(name.as_str())
                .map(|i| format!("block{i}"))
                .ok_or_else(|| Error::Invariant(format!("label {name} not in data"))),
            _ => Err(Error::Invariant("foreign label".into())),
        };
        let labels = self.labels()?;
        let context = SeriesContext {
            ty: self.ty.to_string(),
            d,
            ell: None,
            q: None,
        };
        let part = SeriesPartition::group_by(context, &labels, key)?;
        part.validate(&labels, key)?;
        Ok(part)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = r#"{
        "schema": "exceptional_v1",
        "types": [
            {"family": "G2", "labels": ["x", "y", "z"],
             "series": {"1": [["x", "y"], ["z"]], "2": [["x"], ["y", "z"]]}}
        ]
    }"#;

    #[test]
    fn loads_and_serves_series() {
        let data = load(TOY).unwrap();
        assert_eq!(data.len(), 1);
        let g2 = &data[0];
        assert_eq!(g2.type_tag().to_string(), "G2");
        assert_eq!(g2.d_series(1).unwrap().len(), 2);
        assert_eq!(g2.d_series(5).unwrap().len(), 3);
    }

    #[test]
    fn rejects_bad_files() {
        let not_partition = TOY.replace(r#"["x"], ["y", "z"]"#, r#"["x"], ["y"]"#);
        assert!(matches!(load(&not_partition), Err(Error::InvalidArgument(_))));
        let classical = TOY.replace("\"G2\"", "\"B\"");
        assert!(matches!(load(&classical), Err(Error::InvalidArgument(_))));
        match load("{\n  \"schema\": ") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
