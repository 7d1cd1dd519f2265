//! Exact-arithmetic engine for stone-inflation tilings.
//!
//! Inflation matrices are derived from substitution rules, volume and Dehn
//! invariant eigen-identities are checked over the golden field Q(τ), tile
//! frequencies come from an exact Perron eigenvector, and the inflation
//! matrix can be recovered from the invariant data alone. Two Mosseri–Sadoc
//! systems ship built in: the four-tile `ms4` (z, h, s, a) and the five-tile
//! `ms5` (a, m, r, z, s) in which h splits as r ∪ m.

pub mod cli;
pub mod dehn;
pub mod golden;
pub mod inflation;
pub mod linalg;
pub mod reconstruct;
pub mod reference;
pub mod system;
pub mod verify;
