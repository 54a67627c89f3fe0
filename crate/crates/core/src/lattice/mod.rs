//! Orbit counting for two `Z^2` actions on infinite measure spaces: the
//! translation action `x ↦ x + kα + ℓβ` on the line, and the random-walk
//! skew product `(ω, n) ↦ (σω, n + ω_0)`, `(ω, n) ↦ (ω, n + 1)`.

mod translation;
mod walk;

pub use translation::{
    rational_approximation, translate_counts, Arithmetic, TranslationAction, TranslationCount,
    GOLDEN_RATIO, RATIONAL_DENOMINATOR_LIMIT, SQRT_2,
};
pub use walk::{walk_counts, walk_sample, WalkCount, WalkSample};
