use alloc::vec::Vec;

use super::distribution::LifetimeDistribution;
use crate::numeric::CompensatedSum;
use crate::regvar::ScalingSequence;
use crate::{Error, Result};

/// Terms `(F(n) / L(n))^2` for `n = 1..=n_max` and their partial sums.
///
/// Each term is at most `1/n^2` because `L(n) >= n F(n)`. No convergence
/// verdict is attached; `decay_slope` is advisory only.
#[derive(Debug, Clone, PartialEq)]
pub struct QueenSeries {
    /// `tails[n-1] = F(n)`.
    pub tails: Vec<f64>,
    /// `truncated_means[n-1] = L(n)`.
    pub truncated_means: Vec<f64>,
    pub terms: Vec<f64>,
    pub partial: Vec<f64>,
    /// Least-squares slope of `ln term` against `ln n` over the upper half of
    /// the indices with positive terms.
    pub decay_slope: Option<f64>,
}

impl QueenSeries {
    /// Partial sum `Q(n)`.
    pub fn q(&self, n: usize) -> f64 {
        self.partial[n - 1]
    }
}

pub fn queen_series(f: &LifetimeDistribution, n_max: usize) -> QueenSeries {
    assert!(n_max >= 1, "n_max must be at least 1");
    let mut tails = Vec::with_capacity(n_max);
    let mut means = Vec::with_capacity(n_max);
    let mut terms = Vec::with_capacity(n_max);
    let mut partial = Vec::with_capacity(n_max);
    let mut l = CompensatedSum::new();
    let mut q = CompensatedSum::new();
    for n in 1..=n_max as u64 {
        let tail = f.tail(n);
        l.add(tail);
        let ratio = tail / l.value();
        let term = ratio * ratio;
        q.add(term);
        tails.push(tail);
        means.push(l.value());
        terms.push(term);
        partial.push(q.value());
    }
    let points: Vec<(f64, f64)> = terms
        .iter()
        .enumerate()
        .skip(n_max / 2)
        .filter(|(_, &t)| t > 0.0)
        .map(|(i, &t)| (libm::log((i + 1) as f64), libm::log(t)))
        .collect();
    QueenSeries {
        tails,
        truncated_means: means,
        terms,
        partial,
        decay_slope: slope(&points),
    }
}

fn slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicRow {
    pub n: u32,
    /// `b(2^n)`.
    pub b: u64,
    /// `⌈t b(2^n)⌉`.
    pub index: u64,
    /// `F(⌈t b(2^n)⌉)`.
    pub tail: f64,
    /// `2^n F(⌈t b(2^n)⌉)^2`.
    pub term: f64,
    pub partial: f64,
}

/// Dyadic tail series `D(N) = sum_{n=0}^N 2^n F(⌈t b(2^n)⌉)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicSeries {
    pub t: f64,
    pub rows: Vec<DyadicRow>,
}

impl DyadicSeries {
    /// `D(n)`.
    pub fn d(&self, n: usize) -> f64 {
        self.rows[n].partial
    }
}

/// `b` is the generalized inverse of `scaling`, searched up to `horizon`.
pub fn dyadic_tail_series(
    f: &LifetimeDistribution,
    scaling: &ScalingSequence,
    t: f64,
    n_max: u32,
    horizon: u64,
) -> Result<DyadicSeries> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(alloc::format!(
            "t = {t} must be positive"
        )));
    }
    if n_max > 62 {
        return Err(Error::InvalidInput(alloc::format!(
            "n_max = {n_max} exceeds 62"
        )));
    }
    let mut rows = Vec::with_capacity(n_max as usize + 1);
    let mut acc = CompensatedSum::new();
    for n in 0..=n_max {
        let scale = (1u64 << n) as f64;
        let b = scaling.inverse(scale, horizon)?;
        let index = libm::ceil(t * b as f64);
        let index = if index >= 18_446_744_073_709_551_615.0 {
            u64::MAX
        } else {
            index as u64
        };
        let tail = f.tail(index);
        let term = scale * tail * tail;
        acc.add(term);
        rows.push(DyadicRow {
            n,
            b,
            index,
            tail,
            term,
            partial: acc.value(),
        });
    }
    Ok(DyadicSeries { t, rows })
}
