//! The secretary problem on finite partially ordered sets.
//!
//! Elements of a poset arrive in uniformly random order; after each arrival
//! the observer sees only the order induced on the arrivals so far and must
//! accept or reject the current element irrevocably. Success means accepting
//! a maximal element of the whole poset.
//!
//! The crate provides:
//! - [`poset`]: finite orders, maximal elements, width and chain covers,
//!   prefix states, enumeration up to isomorphism, a text file format;
//! - [`generators`]: standard families (disjoint chains, trees, twins, random);
//! - [`strategy`]: the stopping-rule contract, `τ_k(p)` and classical thresholds;
//! - [`exact`]: exact success probabilities and the backward-induction optimum;
//! - [`bounds`]: closed-form bounds, series and the comparison game;
//! - [`montecarlo`]: reproducible parallel estimation with Wilson intervals;
//! - [`verify`]: exhaustive checks over small posets;
//! - [`cli`]: the command-line front end.

pub mod bits;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod exact;
pub mod format;
pub mod generators;
pub mod montecarlo;
pub mod poset;
pub mod strategy;
pub mod verify;

pub use error::{Error, Result};
pub use generators::{make_family, FamilySpec};
pub use poset::{induced_prefix, ChainCover, Poset, PrefixState};
pub use strategy::{Decision, StoppingRule};
