//! Small numerical kernels shared by the modules: compensated summation,
//! power sums and FFT convolution.

use alloc::vec;
use alloc::vec::Vec;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

const DIRECT_POWER_SUM: u64 = 1024;

/// `sum_{k=1}^n k^{-gamma}` for `gamma > 0`.
///
/// Direct summation up to 1024 terms, Euler-Maclaurin with three Bernoulli
/// corrections beyond. The remainder is below `1e-20` relative.
pub fn power_sum(n: u64, gamma: f64) -> f64 {
    let direct = n.min(DIRECT_POWER_SUM);
    let mut acc = CompensatedSum::new();
    // Smallest terms first.
    for k in (1..=direct).rev() {
        acc.add(libm::pow(k as f64, -gamma));
    }
    if n <= DIRECT_POWER_SUM {
        return acc.value();
    }
    let m = DIRECT_POWER_SUM as f64;
    let x = n as f64;
    let g = |t: f64| libm::pow(t, -gamma);
    let d1 = |t: f64| -gamma * libm::pow(t, -gamma - 1.0);
    let d3 = |t: f64| -gamma * (gamma + 1.0) * (gamma + 2.0) * libm::pow(t, -gamma - 3.0);
    let d5 = |t: f64| {
        -gamma
            * (gamma + 1.0)
            * (gamma + 2.0)
            * (gamma + 3.0)
            * (gamma + 4.0)
            * libm::pow(t, -gamma - 5.0)
    };
    let log_ratio = libm::log(x / m);
    let integral = if gamma == 1.0 {
        log_ratio
    } else {
        let s = 1.0 - gamma;
        libm::pow(m, s) * libm::expm1(s * log_ratio) / s
    };
    acc.add(integral);
    acc.add((g(x) - g(m)) / 2.0);
    acc.add((d1(x) - d1(m)) / 12.0);
    acc.add(-(d3(x) - d3(m)) / 720.0);
    acc.add((d5(x) - d5(m)) / 30240.0);
    acc.value()
}

/// Harmonic number `H_n`.
pub fn harmonic(n: u64) -> f64 {
    power_sum(n, 1.0)
}

#[derive(Clone, Copy)]
struct Complex {
    re: f64,
    im: f64,
}

impl Complex {
    fn mul(self, o: Complex) -> Complex {
        Complex {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

fn fft_in_place(buf: &mut [Complex], inverse: bool) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let twiddles: Vec<Complex> = (0..half)
            .map(|k| {
                let angle = sign * 2.0 * core::f64::consts::PI * k as f64 / len as f64;
                Complex {
                    re: libm::cos(angle),
                    im: libm::sin(angle),
                }
            })
            .collect();
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let a = buf[start + k];
                let b = buf[start + k + half].mul(twiddles[k]);
                buf[start + k] = Complex {
                    re: a.re + b.re,
                    im: a.im + b.im,
                };
                buf[start + k + half] = Complex {
                    re: a.re - b.re,
                    im: a.im - b.im,
                };
            }
        }
        len <<= 1;
    }
    if inverse {
        let scale = 1.0 / n as f64;
        for z in buf.iter_mut() {
            z.re *= scale;
            z.im *= scale;
        }
    }
}

/// Linear convolution of two real sequences.
pub fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    if a.len().min(b.len()) <= 32 {
        let mut out = vec![0.0; out_len];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        return out;
    }
    let size = out_len.next_power_of_two();
    let mut fa = vec![Complex { re: 0.0, im: 0.0 }; size];
    let mut fb = fa.clone();
    for (z, &x) in fa.iter_mut().zip(a) {
        z.re = x;
    }
    for (z, &x) in fb.iter_mut().zip(b) {
        z.re = x;
    }
    fft_in_place(&mut fa, false);
    fft_in_place(&mut fb, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = x.mul(*y);
    }
    fft_in_place(&mut fa, true);
    fa.iter().take(out_len).map(|z| z.re).collect()
}

/// Sample quantile with linear interpolation between order statistics.
/// `sorted` must be ascending and nonempty.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = libm::floor(pos) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}
