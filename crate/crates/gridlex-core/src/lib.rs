//! Monotone and lexicographic structure in multidimensional rank arrays:
//! order-theoretic predicates, pigeonhole-style subarray extraction,
//! extremal generator constructions, and independent brute-force oracles
//! that certify what the fast procedures claim.
//!
//! Arrays are injective and stored as integer ranks; see [`grid`] for the
//! layout and coordinate conventions shared by every module.

pub mod constructions;
pub mod error;
pub mod extract;
pub mod grid;
pub mod oracle;
pub mod ramsey;
pub mod rng;

pub use error::{Error, Result};
pub use grid::{LexType, MonotonicityPattern, RankArray, Sign, Subgrid};
