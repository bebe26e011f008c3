//! Root-system data, constant and spectral-parameter Y-systems, the Rogers
//! dilogarithm, and exact-target checks of the associated dilogarithm identities.

#![allow(clippy::needless_range_loop)]

pub mod cluster;
pub mod dilog;
pub mod error;
pub mod identities;
pub mod qsolve;
pub mod rational;
pub mod rootsys;
pub mod ydynamics;

pub use error::{Error, Result};
pub use rational::ExactRational;
pub use rootsys::{Family, GramVariant, RootSystem, TypeLabel};

/// Deterministic generator used wherever a caller supplies a seed.
pub type SeededRng = rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}
