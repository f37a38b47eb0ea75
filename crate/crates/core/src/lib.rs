//! Unipotent d-series and ℓ-blocks of classical finite reductive groups, the
//! cross-prime fusion closure over good odd primes, and the lattice
//! computations behind depth-zero torsor groups.

pub mod abelian;
pub mod arith;
pub mod error;
pub mod fusion;
pub mod langlands;
pub mod partitions;
pub mod rootdata;
pub mod symbols;
pub mod unipotent;

pub use error::{Error, Result};

/// Environment variable overriding the enumeration bounds.
pub const MAX_RANK_ENV: &str = "BLOCKATLAS_MAX_RANK";

pub(crate) fn env_max_rank() -> Option<u32> {
    std::env::var(MAX_RANK_ENV).ok()?.trim().parse().ok()
}
