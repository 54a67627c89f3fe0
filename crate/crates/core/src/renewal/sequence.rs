use alloc::vec;
use alloc::vec::Vec;

use super::distribution::LifetimeDistribution;
use crate::numeric::{convolve, CompensatedSum};

const SPARSE_ATOMS: usize = 64;
const DIRECT_LIMIT: usize = 1 << 14;
const BASE_BLOCK: usize = 64;

/// `u_0 = 1`, `u_n = sum_{k=1}^n f_k u_{n-k}`, with prefix sums
/// `a_u(n) = u_1 + ... + u_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RenewalSequence {
    u: Vec<f64>,
    a_u: Vec<f64>,
}

impl RenewalSequence {
    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// `a_u(n)`, for `n <= n_max`.
    pub fn a_u(&self, n: usize) -> f64 {
        self.a_u[n]
    }

    /// `[a_u(0), a_u(1), ..., a_u(n_max)]` with `a_u(0) = 0`.
    pub fn prefix_sums(&self) -> &[f64] {
        &self.a_u
    }

    pub fn n_max(&self) -> usize {
        self.u.len() - 1
    }

    /// Largest `|u_n - sum_k f_k u_{n-k}|` over `1 <= n <= limit`, by direct
    /// summation.
    pub fn convolution_residual(&self, f: &LifetimeDistribution, limit: usize) -> f64 {
        let limit = limit.min(self.n_max());
        let masses: Vec<f64> = (0..=limit as u64).map(|k| f.mass(k)).collect();
        let mut worst: f64 = 0.0;
        for n in 1..=limit {
            let mut acc = CompensatedSum::new();
            for (k, &m) in masses.iter().enumerate().take(n + 1).skip(1) {
                acc.add(m * self.u[n - k]);
            }
            worst = worst.max(libm::fabs(self.u[n] - acc.value()));
        }
        worst
    }
}

/// Renewal sequence through `n_max`.
///
/// Geometric lifetimes use the first-order recursion they satisfy, small
/// finite supports a sparse convolution, and everything else the direct
/// convolution up to `2^14` terms and an online FFT convolution beyond.
pub fn renewal_sequence(f: &LifetimeDistribution, n_max: usize) -> RenewalSequence {
    let u = match f {
        LifetimeDistribution::Geometric { p } => geometric(*p, n_max),
        LifetimeDistribution::Finite(_) if f.finite_masses().unwrap().0.len() <= SPARSE_ATOMS => {
            let (atoms, masses) = f.finite_masses().unwrap();
            sparse(atoms, masses, n_max)
        }
        _ => {
            let masses: Vec<f64> = (0..=n_max as u64).map(|k| f.mass(k)).collect();
            if n_max <= DIRECT_LIMIT {
                direct(&masses, n_max)
            } else {
                online(&masses, n_max)
            }
        }
    };
    let mut a_u = Vec::with_capacity(u.len());
    let mut acc = CompensatedSum::new();
    a_u.push(0.0);
    for &x in &u[1..] {
        acc.add(x);
        a_u.push(acc.value());
    }
    RenewalSequence { u, a_u }
}

fn geometric(p: f64, n_max: usize) -> Vec<f64> {
    // With g_n = sum_{k=1}^n (1-p)^{k-1} u_{n-k}: g_n = u_{n-1} + (1-p) g_{n-1}.
    let q = 1.0 - p;
    let mut u = vec![0.0; n_max + 1];
    u[0] = 1.0;
    let mut g = 0.0;
    for n in 1..=n_max {
        g = u[n - 1] + q * g;
        u[n] = p * g;
    }
    u
}

fn sparse(atoms: &[u64], masses: &[f64], n_max: usize) -> Vec<f64> {
    let mut u = vec![0.0; n_max + 1];
    u[0] = 1.0;
    for n in 1..=n_max {
        let mut acc = CompensatedSum::new();
        for (&k, &m) in atoms.iter().zip(masses) {
            let k = k as usize;
            if k > n {
                break;
            }
            acc.add(m * u[n - k]);
        }
        u[n] = acc.value();
    }
    u
}

fn direct(masses: &[f64], n_max: usize) -> Vec<f64> {
    let mut u = vec![0.0; n_max + 1];
    u[0] = 1.0;
    for n in 1..=n_max {
        let mut acc = CompensatedSum::new();
        for k in 1..=n {
            acc.add(masses[k] * u[n - k]);
        }
        u[n] = acc.value();
    }
    u
}

/// Divide-and-conquer online convolution, `O(n log^2 n)`.
fn online(masses: &[f64], n_max: usize) -> Vec<f64> {
    let mut u = vec![0.0; n_max + 1];
    let mut pending = vec![0.0; n_max + 1];
    solve(0, n_max + 1, masses, &mut u, &mut pending);
    u
}

// On entry `pending[i]` holds the contributions of `u[..lo]` to `u[i]`
// for `i` in `lo..hi`.
fn solve(lo: usize, hi: usize, masses: &[f64], u: &mut [f64], pending: &mut [f64]) {
    if hi - lo <= BASE_BLOCK {
        for i in lo..hi {
            if i == 0 {
                u[0] = 1.0;
                continue;
            }
            let mut acc = pending[i];
            for j in lo..i {
                acc += masses[i - j] * u[j];
            }
            u[i] = acc;
        }
        return;
    }
    let mid = lo + (hi - lo) / 2;
    solve(lo, mid, masses, u, pending);
    let conv = convolve(&u[lo..mid], &masses[..hi - lo]);
    for i in mid..hi {
        pending[i] += conv[i - lo];
    }
    solve(mid, hi, masses, u, pending);
}
