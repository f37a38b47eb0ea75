//! Elementary number theory on prime powers: multiplicative orders,
//! primitive prime divisors of `q^d - 1`, and good/bad primes per type.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime power `q = p^r` with `r >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimePower {
    q: u64,
    p: u64,
    r: u32,
}

impl PrimePower {
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidArgument(format!("q = {q} is not a prime power")));
        }
        let p = smallest_prime_factor(q);
        let mut rest = q;
        let mut r = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            r += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidArgument(format!("q = {q} is not a prime power")));
        }
        Ok(PrimePower { q, p, r })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

/// Families of simple types. Only the classical ones carry built-in
/// unipotent combinatorics; the exceptional ones exist for externally
/// supplied data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    #[serde(rename = "2A")]
    TwoA,
    B,
    C,
    D,
    #[serde(rename = "2D")]
    TwoD,
    G2,
    F4,
    E6,
    #[serde(rename = "2E6")]
    TwoE6,
    E7,
    E8,
    #[serde(rename = "3D4")]
    ThreeD4,
}

impl Family {
    pub const CLASSICAL: [Family; 6] = [
        Family::A,
        Family::TwoA,
        Family::B,
        Family::C,
        Family::D,
        Family::TwoD,
    ];

    pub fn is_classical(self) -> bool {
        Self::CLASSICAL.contains(&self)
    }

    /// Fixed rank of an exceptional family.
    pub fn exceptional_rank(self) -> Option<u32> {
        match self {
            Family::G2 => Some(2),
            Family::F4 | Family::ThreeD4 => Some(4),
            Family::E6 | Family::TwoE6 => Some(6),
            Family::E7 => Some(7),
            Family::E8 => Some(8),
            _ => None,
        }
    }

    pub fn bad_primes(self) -> &'static [u64] {
        match self {
            Family::A | Family::TwoA => &[],
            Family::B | Family::C | Family::D | Family::TwoD => &[2],
            Family::G2 | Family::F4 | Family::E6 | Family::TwoE6 | Family::E7 | Family::ThreeD4 => {
                &[2, 3]
            }
            Family::E8 => &[2, 3, 5],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::TwoA => "2A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::TwoD => "2D",
            Family::G2 => "G2",
            Family::F4 => "F4",
            Family::E6 => "E6",
            Family::TwoE6 => "2E6",
            Family::E7 => "E7",
            Family::E8 => "E8",
            Family::ThreeD4 => "3D4",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fam = match s.trim() {
            "A" => Family::A,
            "2A" | "²A" => Family::TwoA,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "2D" | "²D" => Family::TwoD,
            "G2" => Family::G2,
            "F4" => Family::F4,
            "E6" => Family::E6,
            "2E6" => Family::TwoE6,
            "E7" => Family::E7,
            "E8" => Family::E8,
            "3D4" => Family::ThreeD4,
            other => return Err(Error::InvalidArgument(format!("unknown family `{other}`"))),
        };
        Ok(fam)
    }
}

/// A simple type: family plus rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupTypeTag {
    pub family: Family,
    pub rank: u32,
}

impl GroupTypeTag {
    pub fn new(family: Family, rank: u32) -> Result<Self> {
        if rank < 1 {
            return Err(Error::InvalidArgument("rank must be at least 1".into()));
        }
        if matches!(family, Family::D | Family::TwoD) && rank < 2 {
            return Err(Error::InvalidArgument(format!("{family} needs rank >= 2")));
        }
        if let Some(r) = family.exceptional_rank() {
            if r != rank {
                return Err(Error::InvalidArgument(format!("{family} has rank {r}, not {rank}")));
            }
        }
        Ok(GroupTypeTag { family, rank })
    }
}

impl fmt::Display for GroupTypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family.exceptional_rank().is_some() {
            f.write_str(self.family.name())
        } else {
            write!(f, "{}_{}", self.family, self.rank)
        }
    }
}

/// Restrictions a witnessing prime must satisfy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GoodnessFilter {
    /// Require the prime to be good for this type.
    pub good_for: Option<GroupTypeTag>,
    pub odd: bool,
    pub min_prime: Option<u64>,
    /// Exclude 3 (needed when a ³D₄ factor is involved).
    pub exclude_three: bool,
}

impl GoodnessFilter {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn odd() -> Self {
        GoodnessFilter { odd: true, ..Self::default() }
    }

    /// Odd and good for `ty`; the filter used for ℓ-blocks.
    pub fn block_theory(ty: GroupTypeTag) -> Self {
        GoodnessFilter {
            good_for: Some(ty),
            odd: true,
            min_prime: None,
            exclude_three: ty.family == Family::ThreeD4,
        }
    }

    pub fn accepts(&self, ell: u64) -> bool {
        if self.odd && ell.is_multiple_of(2) {
            return false;
        }
        if let Some(m) = self.min_prime {
            if ell < m {
                return false;
            }
        }
        if self.exclude_three && ell == 3 {
            return false;
        }
        if let Some(ty) = self.good_for {
            if !is_good(ell, ty) {
                return false;
            }
        }
        true
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut f = 3;
    while f <= n / f {
        if n.is_multiple_of(f) {
            return f;
        }
        f += 2;
    }
    n
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_prime_factor(n) == n
}

/// `base^exp`, or an error if it does not fit in 64 bits.
pub fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::Overflow(format!("{base}^{exp} exceeds 64 bits")))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Order of `q` in the multiplicative group of `ZZ/ell`.
pub fn mult_order(q: u64, ell: u64) -> Result<u64> {
    if !is_prime(ell) {
        return Err(Error::InvalidArgument(format!("{ell} is not prime")));
    }
    if q.is_multiple_of(ell) {
        return Err(Error::DividesModulus { q, ell });
    }
    let base = q % ell;
    let mut acc = base;
    let mut d = 1;
    while acc != 1 {
        acc = mul_mod(acc, base, ell);
        d += 1;
    }
    Ok(d)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The part of `q^d - 1` made of primes at which `q` has order exactly `d`.
fn primitive_part(q: u64, d: u32) -> Result<u64> {
    let mut m = checked_pow(q, d)? - 1;
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        let other = checked_pow(q, e)? - 1;
        loop {
            let g = gcd(m, other);
            if g <= 1 {
                break;
            }
            m /= g;
        }
    }
    Ok(m)
}

/// Distinct primes at which `q` has order exactly `d`, ascending.
pub fn primitive_primes(q: u64, d: u32) -> Result<Vec<u64>> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let mut m = primitive_part(q, d)?;
    let mut out = Vec::new();
    // Every prime of exact order d is 1 mod d (for d = 1 this is no constraint).
    let step = d as u64;
    let mut cand = if step == 1 { 2 } else { step + 1 };
    while m > 1 && cand <= m / cand {
        if m % cand == 0 {
            out.push(cand);
            while m % cand == 0 {
                m /= cand;
            }
        }
        cand += step;
    }
    if m > 1 {
        out.push(m);
    }
    Ok(out)
}

/// Smallest prime passing `filter` at which `q` has order `d`.
pub fn primitive_prime(q: u64, d: u32, filter: &GoodnessFilter) -> Result<Option<u64>> {
    Ok(primitive_primes(q, d)?.into_iter().find(|&ell| filter.accepts(ell)))
}

pub fn is_good(ell: u64, ty: GroupTypeTag) -> bool {
    !ty.family.bad_primes().contains(&ell)
}

/// Every `d <= d_max` realised as the order of `q` modulo an odd prime that is
/// good for `ty`, mapped to its smallest such prime.
pub fn admissible_d(ty: GroupTypeTag, q: PrimePower, d_max: u32) -> Result<BTreeMap<u32, u64>> {
    let filter = GoodnessFilter::block_theory(ty);
    let mut out = BTreeMap::new();
    for d in 1..=d_max {
        if let Some(ell) = primitive_prime(q.q(), d, &filter)? {
            out.insert(d, ell);
        }
    }
    Ok(out)
}
