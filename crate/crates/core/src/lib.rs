//! Symbolic and numerical machinery for two-sided Birkhoff sums in infinite
//! ergodic theory.
//!
//! The crate is `no_std` and needs only `alloc`. It covers:
//!
//! - [`rankone`]: exact symbolic rank-one (cutting-and-stacking) towers, lazy
//!   bi-infinite names of base points and hierarchical window counting.
//! - [`renewal`]: lifetime distributions on the positive integers, renewal
//!   sequences, the truncated-mean scaling `a(n) = n / L(n)` with its
//!   generalized inverse, the small-tail series and trimmed-sum trials.
//! - [`birkhoff`]: checkpointed one- and two-sided occupation counts and
//!   normalized-ratio estimators.
//! - [`lattice`]: orbit counting for the irrational translation action of
//!   `Z^2` on the line and for the random-walk skew product.
//! - [`regvar`]: scaling sequences and regular-variation diagnostics.
//!
//! IO, file formats and the experiment runner live in the `birklab` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod birkhoff;
mod error;
pub mod lattice;
pub mod numeric;
pub mod rankone;
pub mod regvar;
pub mod renewal;
pub mod rng;

pub use error::{Error, Result};
pub use regvar::ScalingSequence;
