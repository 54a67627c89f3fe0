use alloc::format;
use alloc::vec::Vec;

use rand::distributions::{Open01, Standard};
use rand::Rng;

use crate::numeric::{harmonic, power_sum, CompensatedSum};
use crate::{Error, Result};

/// Largest tail mass a truncating sampler may drop.
pub const SAMPLING_EPSILON: f64 = 1e-9;

/// Finite-support masses, sorted by atom, with suffix tails and prefix
/// first moments for `O(log n)` tail and truncated-mean queries.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSupport {
    atoms: Vec<u64>,
    masses: Vec<f64>,
    /// `tails[i] = sum_{j >= i} masses[j]`, with a trailing 0.
    tails: Vec<f64>,
    /// `moments[i] = sum_{j < i} atoms[j] masses[j]`.
    moments: Vec<f64>,
    /// `cdf[i] = sum_{j <= i} masses[j]`.
    cdf: Vec<f64>,
}

/// Distribution `f` of a lifetime `ν >= 1`, with tail `F(n) = P(ν >= n)`.
#[derive(Debug, Clone, PartialEq)]
pub enum LifetimeDistribution {
    Finite(FiniteSupport),
    /// `f_k = p (1-p)^{k-1}`.
    Geometric {
        p: f64,
    },
    /// `F(n) = n^{-γ}`, `0 < γ <= 1`.
    PowerTail {
        gamma: f64,
    },
    /// `f_k = 1 / (k (k+1))`, i.e. `F(n) = 1/n`.
    Harmonic,
}

impl LifetimeDistribution {
    /// Finite support from `(k, f_k)` pairs; masses must sum to 1 within `1e-12`.
    pub fn finite(mut pairs: Vec<(u64, f64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidInput(
                "finite distribution has no atoms".into(),
            ));
        }
        pairs.sort_by_key(|&(k, _)| k);
        let mut total = CompensatedSum::new();
        for (i, &(k, m)) in pairs.iter().enumerate() {
            if k == 0 {
                return Err(Error::InvalidInput("lifetimes start at 1".into()));
            }
            if i > 0 && pairs[i - 1].0 == k {
                return Err(Error::InvalidInput(format!("atom {k} listed twice")));
            }
            if !(m.is_finite() && m >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "mass {m} at {k} is not a probability"
                )));
            }
            total.add(m);
        }
        let total = total.value();
        if libm::fabs(total - 1.0) > 1e-12 {
            return Err(Error::InvalidInput(format!("masses sum to {total}, not 1")));
        }
        let atoms: Vec<u64> = pairs.iter().map(|p| p.0).collect();
        let masses: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let mut tails = alloc::vec![0.0; masses.len() + 1];
        let mut acc = CompensatedSum::new();
        for i in (0..masses.len()).rev() {
            acc.add(masses[i]);
            tails[i] = acc.value();
        }
        let mut moments = Vec::with_capacity(masses.len() + 1);
        let mut cdf = Vec::with_capacity(masses.len());
        let mut m1 = CompensatedSum::new();
        let mut c = CompensatedSum::new();
        moments.push(0.0);
        for (&k, &m) in atoms.iter().zip(&masses) {
            m1.add(k as f64 * m);
            moments.push(m1.value());
            c.add(m);
            cdf.push(c.value());
        }
        Ok(LifetimeDistribution::Finite(FiniteSupport {
            atoms,
            masses,
            tails,
            moments,
            cdf,
        }))
    }

    /// Point mass at `k`.
    pub fn delta(k: u64) -> Result<Self> {
        Self::finite(alloc::vec![(k, 1.0)])
    }

    pub fn geometric(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "geometric parameter {p} outside (0, 1]"
            )));
        }
        Ok(LifetimeDistribution::Geometric { p })
    }

    pub fn power_tail(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "tail exponent {gamma} outside (0, 1]"
            )));
        }
        Ok(LifetimeDistribution::PowerTail { gamma })
    }

    pub fn harmonic() -> Self {
        LifetimeDistribution::Harmonic
    }

    /// Atoms and masses of a finite-support distribution.
    pub fn finite_masses(&self) -> Option<(&[u64], &[f64])> {
        match self {
            LifetimeDistribution::Finite(fs) => Some((&fs.atoms, &fs.masses)),
            _ => None,
        }
    }

    /// `f_k`.
    pub fn mass(&self, k: u64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        match self {
            LifetimeDistribution::Finite(fs) => match fs.atoms.binary_search(&k) {
                Ok(i) => fs.masses[i],
                Err(_) => 0.0,
            },
            LifetimeDistribution::Geometric { p } => p * libm::pow(1.0 - p, (k - 1) as f64),
            LifetimeDistribution::PowerTail { .. } => self.tail(k) - self.tail(k + 1),
            LifetimeDistribution::Harmonic => {
                let k = k as f64;
                1.0 / (k * (k + 1.0))
            }
        }
    }

    /// `F(n) = P(ν >= n)`; `F(0) = F(1) = 1`.
    pub fn tail(&self, n: u64) -> f64 {
        if n <= 1 {
            return 1.0;
        }
        match self {
            LifetimeDistribution::Finite(fs) => fs.tails[fs.atoms.partition_point(|&k| k < n)],
            LifetimeDistribution::Geometric { p } => libm::pow(1.0 - p, (n - 1) as f64),
            LifetimeDistribution::PowerTail { gamma } => libm::pow(n as f64, -gamma),
            LifetimeDistribution::Harmonic => 1.0 / n as f64,
        }
    }

    /// `L(n) = sum_{k=1}^n F(k) = E(ν ∧ n)`.
    pub fn truncated_mean(&self, n: u64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        match self {
            LifetimeDistribution::Finite(fs) => {
                let i = fs.atoms.partition_point(|&k| k <= n);
                fs.moments[i] + n as f64 * fs.tails[i]
            }
            LifetimeDistribution::Geometric { p } => {
                if *p == 1.0 {
                    1.0
                } else {
                    -libm::expm1(n as f64 * libm::log1p(-p)) / p
                }
            }
            LifetimeDistribution::PowerTail { gamma } => power_sum(n, *gamma),
            LifetimeDistribution::Harmonic => harmonic(n),
        }
    }

    /// `E ν`, or `None` when infinite.
    pub fn mean(&self) -> Option<f64> {
        match self {
            LifetimeDistribution::Finite(fs) => fs.moments.last().copied(),
            LifetimeDistribution::Geometric { p } => Some(1.0 / p),
            LifetimeDistribution::PowerTail { .. } | LifetimeDistribution::Harmonic => None,
        }
    }

    /// One lifetime by inverse-CDF sampling: `ν = max { n : F(n) > U }`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<u64> {
        match self {
            LifetimeDistribution::Finite(fs) => {
                let u: f64 = rng.sample(Standard);
                let i = fs.cdf.partition_point(|&c| c <= u);
                if i == fs.atoms.len() {
                    // Rounding shortfall of the cumulative sum.
                    let dropped = 1.0 - fs.cdf[fs.cdf.len() - 1];
                    if dropped > SAMPLING_EPSILON {
                        return Err(Error::SamplingHorizon {
                            truncated_mass: dropped,
                            epsilon: SAMPLING_EPSILON,
                        });
                    }
                    return Ok(fs.atoms[fs.atoms.len() - 1]);
                }
                Ok(fs.atoms[i])
            }
            LifetimeDistribution::Geometric { p } => {
                if *p == 1.0 {
                    return Ok(1);
                }
                let u: f64 = rng.sample(Open01);
                let k = libm::floor(libm::log(u) / libm::log1p(-p));
                to_lifetime(k + 1.0)
            }
            LifetimeDistribution::PowerTail { gamma } => {
                let u: f64 = rng.sample(Open01);
                to_lifetime(libm::ceil(libm::pow(u, -1.0 / gamma)) - 1.0)
            }
            LifetimeDistribution::Harmonic => {
                let u: f64 = rng.sample(Open01);
                to_lifetime(libm::ceil(1.0 / u) - 1.0)
            }
        }
    }
}

fn to_lifetime(x: f64) -> Result<u64> {
    // 2^64 is exactly representable; anything at or above it overflows.
    if x >= 18_446_744_073_709_551_616.0 {
        return Err(Error::SampleOverflow);
    }
    Ok((x as u64).max(1))
}
