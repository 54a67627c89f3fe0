//! Lifetime distributions on `{1, 2, ...}` and the scaling machinery built
//! on them: renewal sequences, the truncated mean `L(n) = E(ν ∧ n)`,
//! `a(n) = n / L(n)` with its generalized inverse `b`, the small-tail and
//! dyadic tail series, and trimmed-sum trials for i.i.d. interarrivals.

mod distribution;
mod scaling;
mod sequence;
mod series;
mod trimmed;

pub use distribution::{LifetimeDistribution, SAMPLING_EPSILON};
pub use scaling::{truncated_mean_scaling, TruncatedMeanScaling, DEFAULT_INVERSE_HORIZON};
pub use sequence::{renewal_sequence, RenewalSequence};
pub use series::{dyadic_tail_series, queen_series, DyadicRow, DyadicSeries, QueenSeries};
pub use trimmed::{
    assemble_trials, summarize, trimmed_sum_scale, trimmed_sum_trial, trimmed_sum_trials,
    InterarrivalSample, TrimmedSumResult, TrimmedSummary, TrimmedTrial,
};
