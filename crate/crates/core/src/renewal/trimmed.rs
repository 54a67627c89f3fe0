use alloc::vec::Vec;

use rand::Rng;

use super::distribution::LifetimeDistribution;
use super::scaling::TruncatedMeanScaling;
use crate::numeric::quantile;
use crate::rng::{self, stream_seed};
use crate::{Error, Result};

/// `n` i.i.d. interarrival times with partial sums and running maxima.
#[derive(Debug, Clone, PartialEq)]
pub struct InterarrivalSample {
    pub nu: Vec<u64>,
    /// `partial_sums[i] = nu[0] + ... + nu[i]`.
    pub partial_sums: Vec<u128>,
    /// `running_max[i] = max(nu[0..=i])`.
    pub running_max: Vec<u64>,
}

impl InterarrivalSample {
    pub fn draw<R: Rng + ?Sized>(f: &LifetimeDistribution, n: usize, rng: &mut R) -> Result<Self> {
        let mut nu = Vec::with_capacity(n);
        let mut partial_sums = Vec::with_capacity(n);
        let mut running_max = Vec::with_capacity(n);
        let (mut sum, mut max) = (0u128, 0u64);
        for _ in 0..n {
            let v = f.sample(rng)?;
            sum += v as u128;
            max = max.max(v);
            nu.push(v);
            partial_sums.push(sum);
            running_max.push(max);
        }
        Ok(InterarrivalSample {
            nu,
            partial_sums,
            running_max,
        })
    }

    /// Sum with the single largest term removed.
    pub fn trimmed_sum(&self) -> u128 {
        match (self.partial_sums.last(), self.running_max.last()) {
            (Some(&s), Some(&m)) => s - m as u128,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrimmedTrial {
    pub trial: u64,
    /// Stream id the trial drew from.
    pub seed: u64,
    /// `(ν_1 + ... + ν_n - max ν_i) / b(n)`.
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrimmedSummary {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (`n - 1` denominator); 0 for one trial.
    pub std_dev: f64,
    pub min: f64,
    pub q05: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub q95: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrimmedSumResult {
    pub n: u64,
    pub b_n: u64,
    pub trials: Vec<TrimmedTrial>,
    pub summary: TrimmedSummary,
}

/// One trial drawn from stream `stream_seed(master, trial)`; `b_n = b(n)`.
pub fn trimmed_sum_trial(
    f: &LifetimeDistribution,
    n: u64,
    b_n: u64,
    master: u64,
    trial: u64,
) -> Result<TrimmedTrial> {
    let seed = stream_seed(master, trial);
    let mut r = rng::stream(seed);
    let (mut sum, mut max) = (0u128, 0u64);
    for _ in 0..n {
        let v = f.sample(&mut r)?;
        sum += v as u128;
        max = max.max(v);
    }
    Ok(TrimmedTrial {
        trial,
        seed,
        ratio: (sum - max as u128) as f64 / b_n as f64,
    })
}

/// Summary statistics of the trial ratios, in trial order.
pub fn summarize(ratios: &[f64]) -> TrimmedSummary {
    assert!(!ratios.is_empty());
    let k = ratios.len();
    let mean = ratios.iter().sum::<f64>() / k as f64;
    let std_dev = if k > 1 {
        libm::sqrt(ratios.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (k - 1) as f64)
    } else {
        0.0
    };
    let mut sorted = ratios.to_vec();
    sorted.sort_by(f64::total_cmp);
    TrimmedSummary {
        count: k,
        mean,
        std_dev,
        min: sorted[0],
        q05: quantile(&sorted, 0.05),
        q25: quantile(&sorted, 0.25),
        median: quantile(&sorted, 0.5),
        q75: quantile(&sorted, 0.75),
        q95: quantile(&sorted, 0.95),
        max: sorted[k - 1],
    }
}

/// `trials` independent trimmed-sum ratios at horizon `n`, sequentially.
pub fn trimmed_sum_trials(
    f: &LifetimeDistribution,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<TrimmedSumResult> {
    let b_n = trimmed_sum_scale(f, n, trials)?;
    let results = (0..trials)
        .map(|i| trimmed_sum_trial(f, n, b_n, seed, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_trials(n, b_n, results))
}

/// Checks `n >= 2`, `trials >= 1`, and returns `b(n)`.
pub fn trimmed_sum_scale(f: &LifetimeDistribution, n: u64, trials: u64) -> Result<u64> {
    if n < 2 || trials < 1 {
        return Err(Error::InvalidInput(alloc::format!(
            "need n >= 2 and trials >= 1 (got {n}, {trials})"
        )));
    }
    TruncatedMeanScaling::new(f.clone()).b(n as f64)
}

/// Builds the result from trials already sorted by index.
pub fn assemble_trials(n: u64, b_n: u64, trials: Vec<TrimmedTrial>) -> TrimmedSumResult {
    let ratios: Vec<f64> = trials.iter().map(|t| t.ratio).collect();
    let summary = summarize(&ratios);
    TrimmedSumResult {
        n,
        b_n,
        trials,
        summary,
    }
}
