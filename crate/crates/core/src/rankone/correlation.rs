use alloc::format;
use alloc::vec::Vec;

use super::data::ConstructionData;
use super::sampler::NameSampler;
use super::word::{Symbol, DEFAULT_EXPANSION_BUDGET};
use crate::{Error, Result};

const BATCHES: usize = 16;

/// Window estimate of `m(I ∩ T^{-k} I) / m(I)` for one lag.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationEstimate {
    pub lag: u64,
    /// Positions `i` with `i` and `i + lag` both in the window and both base.
    pub pairs: u64,
    /// Positions `i` with `i` and `i + lag` in the window and `i` base.
    pub occurrences: u64,
    pub ratio: f64,
    /// Batch-means standard error over 16 contiguous blocks of positions.
    pub std_error: f64,
}

/// Pair-occurrence ratios `û_k` in the window of radius `window_radius`
/// around a base point drawn from stream `seed`.
pub fn correlation_ratio_estimate(
    data: &ConstructionData,
    seed: u64,
    window_radius: u64,
    lags: &[u64],
) -> Result<Vec<CorrelationEstimate>> {
    if let Some(&max) = lags.iter().max() {
        if max > window_radius {
            return Err(Error::InvalidInput(format!(
                "lag {max} exceeds window radius {window_radius}"
            )));
        }
    }
    let width = 2 * window_radius + 1;
    if width > DEFAULT_EXPANSION_BUDGET {
        return Err(Error::BudgetExceeded {
            level: 0,
            height: format!("{width}"),
            budget: DEFAULT_EXPANSION_BUDGET,
        });
    }
    let mut sampler = NameSampler::new(data.clone(), seed);
    let window = sampler.window_symbols(window_radius)?;
    Ok(lags.iter().map(|&lag| estimate(&window, lag)).collect())
}

fn estimate(window: &[Symbol], lag: u64) -> CorrelationEstimate {
    let lag_us = lag as usize;
    let span = window.len() - lag_us;
    let mut batch_pairs = [0u64; BATCHES];
    let mut batch_occ = [0u64; BATCHES];
    for i in 0..span {
        if window[i] != Symbol::Base {
            continue;
        }
        let b = i * BATCHES / span;
        batch_occ[b] += 1;
        if window[i + lag_us] == Symbol::Base {
            batch_pairs[b] += 1;
        }
    }
    let pairs: u64 = batch_pairs.iter().sum();
    let occurrences: u64 = batch_occ.iter().sum();
    let ratio = pairs as f64 / occurrences as f64;
    let batch_ratios: Vec<f64> = batch_pairs
        .iter()
        .zip(&batch_occ)
        .filter(|(_, &o)| o > 0)
        .map(|(&p, &o)| p as f64 / o as f64)
        .collect();
    let k = batch_ratios.len();
    let std_error = if k > 1 {
        let mean = batch_ratios.iter().sum::<f64>() / k as f64;
        let var = batch_ratios
            .iter()
            .map(|r| (r - mean) * (r - mean))
            .sum::<f64>()
            / (k - 1) as f64;
        libm::sqrt(var / k as f64)
    } else {
        f64::NAN
    };
    CorrelationEstimate {
        lag,
        pairs,
        occurrences,
        ratio,
        std_error,
    }
}
