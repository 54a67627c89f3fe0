//! Rank-one cutting-and-stacking transformations as symbolic words.
//!
//! The tower `τ_n` is encoded by the word `B_n` over `{B, s}` (base level vs
//! spacer level), read bottom to top. A point of the base interval `I` has a
//! bi-infinite name whose window around time 0 is a subword of `B_m` for
//! large `m`; [`NameSampler`] realizes that name lazily and counts base
//! occurrences hierarchically, so windows of radius `2^40` cost
//! `O(levels * max c_n)` big-integer operations.

mod correlation;
mod data;
mod sampler;
mod tower;
mod word;

use alloc::vec::Vec;

use num_bigint::BigUint;

pub use correlation::{correlation_ratio_estimate, CorrelationEstimate};
pub use data::{ConstructionData, SpacerCount, Stage};
pub use sampler::{NameSampler, WindowCounts, DEFAULT_DEPTH_CAP};
pub use tower::{tower_stats, TowerStats};
pub use word::{
    expand_word, expand_word_with_budget, Symbol, SymbolicWord, DEFAULT_EXPANSION_BUDGET,
};

use crate::regvar::ScalingSequence;
use tower::Tower;

/// The step function `a(n) = C_ν` for `q_ν <= n < q_{ν+1}`.
///
/// Steps are tabulated while `q_ν` fits in a `u64`. For finite data the
/// sequence ends at `q_{N+1}` where `N` is the last listed stage.
pub fn rank_one_scaling(data: &ConstructionData) -> ScalingSequence {
    let mut tower = Tower::new(data.clone());
    let mut thresholds = Vec::new();
    let mut values = Vec::new();
    let limit = BigUint::from(u64::MAX);
    let mut end = None;
    let mut level = 1;
    loop {
        if tower.ensure(level + 1).is_err() {
            // Stage `level` is missing: the last step ends at q_level.
            end = Some(u64::try_from(tower.height(level)).unwrap_or(u64::MAX));
            break;
        }
        let q = tower.height(level);
        if *q > limit {
            break;
        }
        thresholds.push(u64::try_from(q).unwrap());
        values.push(biguint_to_f64(&tower.base_counts[level]));
        level += 1;
    }
    ScalingSequence::step_function(thresholds, values, end)
}

pub(crate) fn biguint_to_f64(x: &BigUint) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::INFINITY)
}
