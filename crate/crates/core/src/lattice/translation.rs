use alloc::format;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::{Error, Result};

/// `(1 + √5) / 2` rounded to nearest.
pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;
/// `√2` rounded to nearest.
pub const SQRT_2: f64 = core::f64::consts::SQRT_2;

/// Ratios `α/β` within `1e-12` of a fraction with denominator at most this
/// are rejected as commensurable.
pub const RATIONAL_DENOMINATOR_LIMIT: u64 = 1000;

/// `τ_{(k,ℓ)}(x) = x + kα + ℓβ`, counted against the window `W = [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationAction {
    pub alpha: f64,
    pub beta: f64,
    pub x: f64,
}

impl TranslationAction {
    /// Rejects zero or non-finite inputs and ratios `α/β` that are
    /// numerically rational with a small denominator.
    pub fn new(alpha: f64, beta: f64, x: f64) -> Result<Self> {
        let action = Self::new_commensurable(alpha, beta, x)?;
        if let Some((p, q)) =
            rational_approximation(alpha / beta, RATIONAL_DENOMINATOR_LIMIT, 1e-12)
        {
            return Err(Error::InvalidInput(format!(
                "alpha/beta = {} is numerically the rational {p}/{q}",
                alpha / beta
            )));
        }
        Ok(action)
    }

    /// Like [`new`](Self::new) without the irrationality check.
    pub fn new_commensurable(alpha: f64, beta: f64, x: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("x", x)] {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("{name} = {v} is not finite")));
            }
        }
        if alpha == 0.0 || beta == 0.0 {
            return Err(Error::InvalidInput("translations must be nonzero".into()));
        }
        Ok(TranslationAction { alpha, beta, x })
    }

    /// `(α, β)` divided by `|β|`.
    pub fn normalized(&self) -> (f64, f64) {
        let s = libm::fabs(self.beta);
        (self.alpha / s, self.beta / s)
    }

    /// `R = min(|α|, |β|) / max(|α|, |β|)`.
    pub fn ratio_constant(&self) -> f64 {
        let (a, b) = (libm::fabs(self.alpha), libm::fabs(self.beta));
        a.min(b) / a.max(b)
    }
}

/// Best rational approximation `p/q` of `r` with `q <= max_den` and
/// `|r - p/q| <= tol`, by continued fractions.
pub fn rational_approximation(r: f64, max_den: u64, tol: f64) -> Option<(i64, u64)> {
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut x = r;
    for _ in 0..64 {
        let a = libm::floor(x);
        if libm::fabs(a) > 1e15 {
            return None;
        }
        let a_i = a as i128;
        let h2 = a_i * h1 + h0;
        let k2 = a_i * k1 + k0;
        if k2 > max_den as i128 {
            return None;
        }
        if libm::fabs(r - h2 as f64 / k2 as f64) <= tol {
            return Some((h2 as i64, k2 as u64));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = x - a;
        if frac == 0.0 {
            return None;
        }
        x = 1.0 / frac;
    }
    None
}

/// Arithmetic used for a count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arithmetic {
    /// Exact fixed point in 128-bit integers.
    Fixed128,
    /// Exact fixed point in arbitrary precision.
    BigInt,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationCount {
    pub n: u64,
    /// `#{(k, ℓ) : |k|, |ℓ| <= N, x + kα + ℓβ ∈ [0, 1)}`.
    pub count: u64,
    /// `count / (2N + 1)`.
    pub ratio: f64,
    pub arithmetic: Arithmetic,
}

/// `(mantissa, exponent)` with `v = mantissa * 2^exponent` exactly.
fn decompose(v: f64) -> (i64, i32) {
    if v == 0.0 {
        return (0, 0);
    }
    let bits = v.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    let (m, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1i64 << 52), exp - 1075)
    };
    let tz = m.trailing_zeros() as i32;
    (sign * (m >> tz), e + tz)
}

/// Scaled integer inputs: every value times `2^shift`.
struct Scaled {
    shift: u32,
    alpha: (i64, i32),
    beta: (i64, i32),
    x: (i64, i32),
}

impl Scaled {
    fn new(a: &TranslationAction) -> Self {
        let alpha = decompose(a.alpha);
        let beta = decompose(a.beta);
        let x = decompose(a.x);
        let min_exp = [alpha, beta, x]
            .iter()
            .filter(|v| v.0 != 0)
            .map(|v| v.1)
            .min()
            .unwrap_or(0)
            .min(0);
        Scaled {
            shift: (-min_exp) as u32,
            alpha,
            beta,
            x,
        }
    }

    fn bits_needed(&self, n: u64) -> u32 {
        let mag = |v: (i64, i32)| {
            if v.0 == 0 {
                0
            } else {
                (64 - v.0.unsigned_abs().leading_zeros()) as i64 + v.1 as i64 + self.shift as i64
            }
        };
        let top = mag(self.alpha)
            .max(mag(self.beta))
            .max(mag(self.x))
            .max(self.shift as i64 + 1);
        let n_bits = 64 - n.max(1).leading_zeros() as i64;
        (top + n_bits + 3) as u32
    }

    fn int128(&self, v: (i64, i32)) -> i128 {
        (v.0 as i128) << (v.1 + self.shift as i32) as u32
    }

    fn big(&self, v: (i64, i32)) -> BigInt {
        BigInt::from(v.0) << (v.1 + self.shift as i32) as u32
    }
}

/// Number of integers `ℓ ∈ [-n, n]` with `0 <= y + ℓ b < one`.
fn admissible<T>(y: T, b: &T, one: &T, n: &T, zero: &T) -> T
where
    T: Integer + Clone + core::ops::Neg<Output = T>,
{
    let (lo, hi) = if *b > *zero {
        // ℓ >= ⌈-y / b⌉ and ℓ <= ⌈(one - y) / b⌉ - 1.
        let lo = (zero.clone() - y.clone()).div_ceil(b);
        let hi = (one.clone() - y).div_ceil(b) - T::one();
        (lo, hi)
    } else {
        let nb = zero.clone() - b.clone();
        // ℓ (-b) <= y and ℓ (-b) > y - one.
        let hi = y.div_floor(&nb);
        let lo = (y - one.clone()).div_floor(&nb) + T::one();
        (lo, hi)
    };
    let lo = if lo < -n.clone() { -n.clone() } else { lo };
    let hi = if hi > *n { n.clone() } else { hi };
    if hi >= lo {
        hi - lo + T::one()
    } else {
        zero.clone()
    }
}

/// Exact count over the `(2N+1)^2` box in `O(N)`: for each `k` the
/// admissible `ℓ` form an integer interval.
///
/// The inputs are treated as the exact dyadic rationals they are, so the
/// count has no rounding error. Fixed-point 128-bit arithmetic is used
/// when `|α|, |β|, |x|, 1` and `N` fit in 125 bits after scaling, arbitrary
/// precision otherwise.
pub fn translate_counts(action: &TranslationAction, n: u64) -> TranslationCount {
    let scaled = Scaled::new(action);
    let denom = 2 * n + 1;
    if scaled.bits_needed(n) <= 125 {
        let (a, b, x) = (
            scaled.int128(scaled.alpha),
            scaled.int128(scaled.beta),
            scaled.int128(scaled.x),
        );
        let one = 1i128 << scaled.shift;
        let nn = n as i128;
        let mut count = 0i128;
        for k in -nn..=nn {
            count += admissible(x + k * a, &b, &one, &nn, &0);
        }
        let count = count as u64;
        TranslationCount {
            n,
            count,
            ratio: count as f64 / denom as f64,
            arithmetic: Arithmetic::Fixed128,
        }
    } else {
        let (a, b, x) = (
            scaled.big(scaled.alpha),
            scaled.big(scaled.beta),
            scaled.big(scaled.x),
        );
        let one = BigInt::from(1) << scaled.shift;
        let nn = BigInt::from(n);
        let zero = BigInt::from(0);
        let mut count = 0u64;
        let mut y = &x - &a * &nn;
        for _ in 0..denom {
            let c = admissible(y.clone(), &b, &one, &nn, &zero);
            count += u64::try_from(c).expect("per-k count bounded by 2N+1");
            y += &a;
        }
        TranslationCount {
            n,
            count,
            ratio: count as f64 / denom as f64,
            arithmetic: Arithmetic::BigInt,
        }
    }
}
