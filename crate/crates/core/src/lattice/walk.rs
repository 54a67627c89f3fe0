use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::renewal::{LifetimeDistribution, RenewalSequence};
use crate::{rng, Error, Result};

/// A two-sided i.i.d. step sequence `ω_{-J}, ..., ω_{J-1}` and its partial
/// sums `s_{-J}, ..., s_J`:
///
/// ```text
/// s_k = ω_0 + ... + ω_{k-1}          k > 0
/// s_0 = 0
/// s_k = -(ω_k + ... + ω_{-1})        k < 0
/// ```
///
/// Steps are drawn in the order `ω_0, ω_{-1}, ω_1, ω_{-2}, ...`, so a
/// larger `J` under the same seed extends a smaller sample.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkSample {
    j: usize,
    seed: u64,
    omega: Vec<u64>,
    s: Vec<i128>,
}

impl WalkSample {
    /// Builds a sample from explicit steps, `omega[i] = ω_{i-J}`.
    pub fn from_steps(omega: Vec<u64>) -> Result<Self> {
        if omega.is_empty() || !omega.len().is_multiple_of(2) {
            return Err(Error::InvalidInput(
                "need an even, nonzero number of steps".into(),
            ));
        }
        if omega.contains(&0) {
            return Err(Error::InvalidInput("steps must be positive".into()));
        }
        let j = omega.len() / 2;
        let mut s = vec![0i128; 2 * j + 1];
        for k in 1..=j {
            s[j + k] = s[j + k - 1] + omega[j + k - 1] as i128;
            s[j - k] = s[j - k + 1] - omega[j - k] as i128;
        }
        Ok(WalkSample {
            j,
            seed: 0,
            omega,
            s,
        })
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `ω_k` for `-J <= k < J`.
    pub fn omega(&self, k: i64) -> u64 {
        self.omega[(k + self.j as i64) as usize]
    }

    /// `s_k` for `|k| <= J`.
    pub fn s(&self, k: i64) -> i128 {
        self.s[(k + self.j as i64) as usize]
    }

    /// `s_k(σ^m ω) = ω_m + ... + ω_{m+k-1}` for `k >= 0`, summed directly
    /// from the steps.
    pub fn shifted_sum(&self, m: i64, k: u64) -> i128 {
        (0..k as i64).map(|i| self.omega(m + i) as i128).sum()
    }

    /// Partial sums `s_{-J}, ..., s_J`.
    pub fn partial_sums(&self) -> &[i128] {
        &self.s
    }

    fn check_coverage(&self, n: u64) -> Result<()> {
        let (hi, lo) = (self.s[2 * self.j], self.s[0]);
        if hi >= n as i128 && -lo >= n as i128 {
            return Ok(());
        }
        let reach = hi.min(-lo).max(1) as f64;
        let suggested = libm::ceil(self.j as f64 * (n as f64 / reach) * 1.25) as usize + 1;
        Err(Error::Coverage {
            needed: n,
            reached_plus: hi,
            reached_minus: lo,
            j: self.j,
            suggested_j: suggested.max(self.j + 1),
        })
    }

    /// `#{k : |s_k| <= N}` by binary search.
    pub fn count_within(&self, n: u64) -> Result<u64> {
        self.check_coverage(n)?;
        let n = n as i128;
        let lo = self.s.partition_point(|&v| v < -n);
        let hi = self.s.partition_point(|&v| v <= n);
        Ok((hi - lo) as u64)
    }

    /// `(#{k >= 0 : s_k <= N}, #{k <= 0 : s_k >= -N})`.
    pub fn one_sided_counts(&self, n: u64) -> Result<(u64, u64)> {
        self.check_coverage(n)?;
        let n = n as i128;
        let (neg, pos) = self.s.split_at(self.j);
        let plus = pos.partition_point(|&v| v <= n) as u64;
        let minus = (neg.len() - neg.partition_point(|&v| v < -n)) as u64 + 1;
        Ok((plus, minus))
    }

    /// The same count as [`count_within`](Self::count_within) by marking
    /// the visited sites of `[-N, N]` in an occupation array.
    pub fn direct_visit_count(&self, n: u64) -> Result<u64> {
        self.check_coverage(n)?;
        let width = 2 * n as usize + 1;
        let mut visited = vec![false; width];
        for &v in &self.s {
            if v.unsigned_abs() <= n as u128 {
                visited[(v + n as i128) as usize] = true;
            }
        }
        Ok(visited.iter().filter(|&&b| b).count() as u64)
    }
}

/// Draws `2J` i.i.d. steps from `f` on stream `seed`.
pub fn walk_sample(f: &LifetimeDistribution, seed: u64, j: usize) -> Result<WalkSample> {
    if j == 0 {
        return Err(Error::InvalidInput("J must be at least 1".into()));
    }
    let mut r = rng::stream(seed);
    let mut omega = vec![0u64; 2 * j];
    for k in 0..j {
        omega[j + k] = f.sample(&mut r)?;
        omega[j - 1 - k] = f.sample(&mut r)?;
    }
    let mut sample = WalkSample::from_steps(omega)?;
    sample.seed = seed;
    Ok(sample)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkCount {
    pub n: u64,
    /// `#{k ∈ [-N, N] : |s_k| <= N}`.
    pub count: u64,
    pub a_u: f64,
    /// `count / a_u(N)`.
    pub ratio_to_renewal: f64,
}

/// Orbit count of the walk against the renewal scaling `a_u`.
pub fn walk_counts(sample: &WalkSample, n: u64, renewal: &RenewalSequence) -> Result<WalkCount> {
    if n as usize > renewal.n_max() {
        return Err(Error::InvalidInput(format!(
            "renewal sequence has {} terms, N = {n} needs more",
            renewal.n_max()
        )));
    }
    // |s_k| >= |k| since every step is at least 1, so k ∈ [-N, N] is implied.
    let count = sample.count_within(n)?;
    let a_u = renewal.a_u(n as usize);
    Ok(WalkCount {
        n,
        count,
        a_u,
        ratio_to_renewal: count as f64 / a_u,
    })
}
