use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::data::{ConstructionData, SpacerCount};
use super::word::Symbol;
use crate::Result;

/// Exact tower statistics through stage `n_max`.
///
/// Index `i` holds the value for stage `i + 1`: `heights[i] = q_{i+1}`,
/// `products[i] = C_{i+1} = c_1 ... c_{i+1}` and
/// `spacer_mass_partial[i] = sum_{n <= i+1} (1/C_n) sum_k S_{n,k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TowerStats {
    pub heights: Vec<BigUint>,
    pub products: Vec<BigUint>,
    pub spacer_mass_partial: Vec<BigRational>,
}

impl TowerStats {
    /// Partial total measure `1 + spacer_mass_partial[n-1]`.
    pub fn measure_through(&self, n: usize) -> BigRational {
        BigRational::one() + &self.spacer_mass_partial[n - 1]
    }
}

/// `q_n`, `C_n` and the spacer mass through stage `n_max`, exact.
pub fn tower_stats(data: &ConstructionData, n_max: usize) -> Result<TowerStats> {
    assert!(n_max >= 1, "n_max must be at least 1");
    let mut tower = Tower::new(data.clone());
    // Stage n_max's spacers are resolved once q_{n_max + 1} is known.
    tower.ensure(n_max + 1)?;
    let heights = tower.heights[..n_max].to_vec();
    let products = tower.base_counts[1..=n_max].to_vec();
    let mut partial = Vec::with_capacity(n_max);
    let mut acc = BigRational::zero();
    for n in 1..=n_max {
        let total: BigUint = tower.spacers[n - 1].iter().sum();
        acc += BigRational::new(total.into(), tower.base_counts[n].clone().into());
        partial.push(acc.clone());
    }
    Ok(TowerStats {
        heights,
        products,
        spacer_mass_partial: partial,
    })
}

/// Lazily extended exact tower data, shared by word expansion, window
/// counting and the step-function scaling.
#[derive(Debug, Clone)]
pub(crate) struct Tower {
    data: ConstructionData,
    /// `heights[n-1] = q_n`.
    pub(crate) heights: Vec<BigUint>,
    /// `base_counts[n-1]` = number of base symbols in `B_n` = `C_{n-1}`.
    pub(crate) base_counts: Vec<BigUint>,
    /// `spacers[n-1][k]` = `S_{n,k+1}` resolved to a number.
    pub(crate) spacers: Vec<Vec<BigUint>>,
}

impl Tower {
    pub(crate) fn new(data: ConstructionData) -> Self {
        Tower {
            data,
            heights: alloc::vec![BigUint::one()],
            base_counts: alloc::vec![BigUint::one()],
            spacers: Vec::new(),
        }
    }

    pub(crate) fn data(&self) -> &ConstructionData {
        &self.data
    }

    /// Makes `q_1 ..= q_level` and stages `1 .. level` available.
    pub(crate) fn ensure(&mut self, level: usize) -> Result<()> {
        while self.heights.len() < level {
            let n = self.heights.len();
            let stage = self.data.stage(n)?;
            let q = &self.heights[n - 1];
            let resolved: Vec<BigUint> = stage
                .spacers()
                .iter()
                .map(|s| match *s {
                    SpacerCount::Fixed(v) => BigUint::from(v),
                    SpacerCount::HeightMultiple(m) => q * m,
                })
                .collect();
            let total: BigUint = resolved.iter().sum();
            let next = q * stage.cuts() + total;
            let base = &self.base_counts[n - 1] * stage.cuts();
            self.spacers.push(resolved);
            self.heights.push(next);
            self.base_counts.push(base);
        }
        Ok(())
    }

    pub(crate) fn height(&self, level: usize) -> &BigUint {
        &self.heights[level - 1]
    }

    /// Number of base symbols in `B_level[0..j)`, by descent through the
    /// block structure. Requires `j <= q_level` and the level realized.
    pub(crate) fn prefix_base(&self, level: usize, j: &BigUint) -> BigUint {
        let mut acc = BigUint::zero();
        let mut level = level;
        let mut j = j.clone();
        'descend: loop {
            if j.is_zero() {
                return acc;
            }
            if level == 1 {
                return acc + 1u32;
            }
            let stage = level - 1;
            let q = &self.heights[stage - 1];
            let inner = &self.base_counts[stage - 1];
            for s in &self.spacers[stage - 1] {
                if j < *q {
                    level = stage;
                    continue 'descend;
                }
                j -= q;
                acc += inner;
                if j <= *s {
                    return acc;
                }
                j -= s;
            }
            return acc;
        }
    }

    /// Appends the symbols of `B_level[lo..hi)` to `out`.
    pub(crate) fn extract(&self, level: usize, lo: &BigUint, hi: &BigUint, out: &mut Vec<Symbol>) {
        if lo >= hi {
            return;
        }
        if level == 1 {
            out.push(Symbol::Base);
            return;
        }
        let stage = level - 1;
        let q = &self.heights[stage - 1];
        let mut start = BigUint::zero();
        for s in &self.spacers[stage - 1] {
            if start >= *hi {
                return;
            }
            let end = &start + q;
            if end > *lo {
                let a = if *lo > start {
                    lo - &start
                } else {
                    BigUint::zero()
                };
                let b = if *hi < end { hi - &start } else { q.clone() };
                self.extract(stage, &a, &b, out);
            }
            start = end;
            let end = &start + s;
            let a = if *lo > start {
                lo.clone()
            } else {
                start.clone()
            };
            let b = if *hi < end { hi.clone() } else { end.clone() };
            if a < b {
                let run: BigUint = b - a;
                let run = u64::try_from(run).expect("extracted range fits in memory");
                out.extend(core::iter::repeat_n(Symbol::Spacer, run as usize));
            }
            start = end;
        }
    }
}
