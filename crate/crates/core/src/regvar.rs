//! Scaling sequences and regular-variation diagnostics.
//!
//! The diagnostics tabulate finite windows. They report bands, never
//! verdicts about limits.

use alloc::format;
use alloc::vec::Vec;

use num_integer::Roots;

use crate::numeric::harmonic;
use crate::renewal::{RenewalSequence, TruncatedMeanScaling};
use crate::{Error, Result};

/// Where a scaling sequence comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingSource {
    RankOneStep,
    Renewal,
    TruncatedMean,
    ClosedForm(ClosedForm),
}

/// Closed-form positive nondecreasing sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    /// `a(n) = n`.
    Identity,
    /// `a(n) = ⌈√n⌉`.
    SqrtCeil,
    /// `a(n) = n / H_n`.
    OverHarmonic,
}

impl ClosedForm {
    pub fn name(self) -> &'static str {
        match self {
            ClosedForm::Identity => "identity",
            ClosedForm::SqrtCeil => "sqrt_ceil",
            ClosedForm::OverHarmonic => "n_over_harmonic",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "identity" => Some(ClosedForm::Identity),
            "sqrt_ceil" => Some(ClosedForm::SqrtCeil),
            "n_over_harmonic" => Some(ClosedForm::OverHarmonic),
            _ => None,
        }
    }

    pub fn eval(self, n: u64) -> f64 {
        match self {
            ClosedForm::Identity => n as f64,
            ClosedForm::SqrtCeil => {
                let r = n.sqrt();
                (if r * r == n { r } else { r + 1 }) as f64
            }
            ClosedForm::OverHarmonic => n as f64 / harmonic(n),
        }
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Step {
        thresholds: Vec<u64>,
        values: Vec<f64>,
        end: Option<u64>,
    },
    Tabulated(Vec<f64>),
    TruncatedMean(TruncatedMeanScaling),
    ClosedForm(ClosedForm),
}

/// A normalizing sequence `a(n) > 0`, queried at integers `n >= 1`.
#[derive(Debug, Clone)]
pub struct ScalingSequence {
    kind: Kind,
}

impl ScalingSequence {
    /// `a(n) = values[i]` for `thresholds[i] <= n < thresholds[i+1]`; the last
    /// step runs to `end` (exclusive) or forever.
    pub fn step_function(thresholds: Vec<u64>, values: Vec<f64>, end: Option<u64>) -> Self {
        assert_eq!(thresholds.len(), values.len());
        debug_assert!(thresholds.windows(2).all(|w| w[0] < w[1]));
        ScalingSequence {
            kind: Kind::Step {
                thresholds,
                values,
                end,
            },
        }
    }

    /// `a_u(n) = u_1 + ... + u_n`, defined for `1 <= n <= n_max`.
    pub fn renewal(seq: &RenewalSequence) -> Self {
        ScalingSequence {
            kind: Kind::Tabulated(seq.prefix_sums().to_vec()),
        }
    }

    pub fn truncated_mean(scaling: TruncatedMeanScaling) -> Self {
        ScalingSequence {
            kind: Kind::TruncatedMean(scaling),
        }
    }

    pub fn closed_form(form: ClosedForm) -> Self {
        ScalingSequence {
            kind: Kind::ClosedForm(form),
        }
    }

    pub fn source(&self) -> ScalingSource {
        match &self.kind {
            Kind::Step { .. } => ScalingSource::RankOneStep,
            Kind::Tabulated(_) => ScalingSource::Renewal,
            Kind::TruncatedMean(_) => ScalingSource::TruncatedMean,
            Kind::ClosedForm(c) => ScalingSource::ClosedForm(*c),
        }
    }

    /// `a(n)`, or `None` outside the domain (`n = 0` or past a table end).
    pub fn value(&self, n: u64) -> Option<f64> {
        if n == 0 {
            return None;
        }
        match &self.kind {
            Kind::Step {
                thresholds,
                values,
                end,
            } => {
                if end.is_some_and(|e| n >= e) {
                    return None;
                }
                let i = thresholds.partition_point(|&q| q <= n);
                if i == 0 {
                    None
                } else {
                    Some(values[i - 1])
                }
            }
            Kind::Tabulated(table) => table.get(n as usize).copied(),
            Kind::TruncatedMean(s) => Some(s.a(n)),
            Kind::ClosedForm(c) => Some(c.eval(n)),
        }
    }

    pub fn get(&self, n: u64) -> Result<f64> {
        self.value(n).ok_or(Error::OutOfRange { n })
    }

    /// Generalized inverse `min { t >= 1 : a(t) >= y }`, searched up to
    /// `horizon` by doubling then bisection. Relies on `a` nondecreasing.
    pub fn inverse(&self, y: f64, horizon: u64) -> Result<u64> {
        if let Kind::TruncatedMean(s) = &self.kind {
            return s.with_horizon(horizon).b(y);
        }
        generalized_inverse(|t| self.value(t), y, horizon)
    }
}

/// `min { t >= 1 : a(t) >= y }` for a nondecreasing `a`.
pub(crate) fn generalized_inverse(
    a: impl Fn(u64) -> Option<f64>,
    y: f64,
    horizon: u64,
) -> Result<u64> {
    let horizon_err = Error::Horizon { target: y, horizon };
    let at = |t: u64| a(t).ok_or(horizon_err.clone());
    if at(1)? >= y {
        return Ok(1);
    }
    let mut lo = 1u64;
    let mut hi = 2u64;
    loop {
        if hi > horizon {
            return Err(horizon_err);
        }
        if at(hi)? >= y {
            break;
        }
        lo = hi;
        hi = hi.saturating_mul(2);
        if hi == lo {
            return Err(horizon_err);
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if at(mid)? >= y {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Parameters for [`er_diagnostic`].
#[derive(Debug, Clone, PartialEq)]
pub struct ErOptions {
    pub p_values: Vec<u64>,
    pub n_lo: u64,
    pub n_hi: u64,
    /// Geometric grid factor, at least 2.
    pub grid: u64,
    /// Band `M` used to report the settling index `N(p)`.
    pub band: f64,
}

impl ErOptions {
    pub fn new(p_values: Vec<u64>, n_lo: u64, n_hi: u64) -> Self {
        ErOptions {
            p_values,
            n_lo,
            n_hi,
            grid: 2,
            band: 1.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErRow {
    pub p: u64,
    pub n: u64,
    pub a_n: f64,
    pub a_pn: f64,
    /// `a(pn) / (p a(n))`.
    pub ratio: f64,
}

/// Ratio table `a(pn) / (p a(n))` for `n` on the grid with `pn <= n_hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErReport {
    pub p_values: Vec<u64>,
    pub range: (u64, u64),
    pub band: f64,
    pub rows: Vec<ErRow>,
    /// Largest `max(r, 1/r)` over the table.
    pub m_hat: f64,
    /// Per `p`: the first grid `n` from which every later row lies in the
    /// band, if any.
    pub settle: Vec<(u64, Option<u64>)>,
}

impl ErReport {
    /// Largest `max(r, 1/r)` among rows with multiplier `p`.
    pub fn m_hat_for(&self, p: u64) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.p == p)
            .map(|r| spread(r.ratio))
            .fold(1.0, f64::max)
    }
}

fn spread(r: f64) -> f64 {
    if r >= 1.0 {
        r
    } else {
        1.0 / r
    }
}

fn grid_points(n_lo: u64, limit: u64, factor: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut n = n_lo;
    while n <= limit {
        out.push(n);
        match n.checked_mul(factor) {
            Some(next) => n = next,
            None => break,
        }
    }
    out
}

/// Extended-regular-variation band diagnostic.
pub fn er_diagnostic(a: &ScalingSequence, opts: &ErOptions) -> Result<ErReport> {
    if opts.n_lo == 0 || opts.grid < 2 || opts.p_values.is_empty() {
        return Err(Error::InvalidInput(format!(
            "need n_lo >= 1, grid >= 2 and at least one p (got n_lo={}, grid={})",
            opts.n_lo, opts.grid
        )));
    }
    let mut rows = Vec::new();
    let mut settle = Vec::new();
    for &p in &opts.p_values {
        if p < 2 || opts.n_hi / p < opts.n_lo {
            return Err(Error::InvalidInput(format!(
                "p = {p} needs p > 1 and n_hi >= p * n_lo"
            )));
        }
        let mut first_in_band = None;
        for n in grid_points(opts.n_lo, opts.n_hi / p, opts.grid) {
            let a_n = a.get(n)?;
            let a_pn = a.get(p * n)?;
            let ratio = a_pn / (p as f64 * a_n);
            if spread(ratio) <= opts.band {
                first_in_band.get_or_insert(n);
            } else {
                first_in_band = None;
            }
            rows.push(ErRow {
                p,
                n,
                a_n,
                a_pn,
                ratio,
            });
        }
        settle.push((p, first_in_band));
    }
    let m_hat = rows.iter().map(|r| spread(r.ratio)).fold(1.0, f64::max);
    Ok(ErReport {
        p_values: opts.p_values.clone(),
        range: (opts.n_lo, opts.n_hi),
        band: opts.band,
        rows,
        m_hat,
        settle,
    })
}

/// `a(2^k n) / (2^k a(n))` as a product of doubling ratios.
pub fn ratio_via_doubling(a: &ScalingSequence, k: u32, n: u64) -> Result<f64> {
    let mut out = 1.0;
    let mut m = n;
    for _ in 0..k {
        out *= a.get(2 * m)? / (2.0 * a.get(m)?);
        m *= 2;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvRow {
    pub n: u64,
    pub l_n: f64,
    pub l_2n: f64,
    pub ratio: f64,
}

/// Table of `L(2n) / L(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvReport {
    pub rows: Vec<SvRow>,
    /// `max |L(2n)/L(n) - 1|` over the table.
    pub max_deviation: f64,
    /// Deviation at the largest tabulated `n`.
    pub final_deviation: f64,
}

/// Slow-variation diagnostic over grid points `n` with `2n <= n_hi`.
pub fn sv_diagnostic(l: impl Fn(u64) -> f64, n_lo: u64, n_hi: u64, grid: u64) -> Result<SvReport> {
    if n_lo == 0 || grid < 2 || n_hi / 2 < n_lo {
        return Err(Error::InvalidInput(format!(
            "need 1 <= n_lo, 2 n_lo <= n_hi and grid >= 2 (got {n_lo}, {n_hi}, {grid})"
        )));
    }
    let rows: Vec<SvRow> = grid_points(n_lo, n_hi / 2, grid)
        .into_iter()
        .map(|n| {
            let l_n = l(n);
            let l_2n = l(2 * n);
            SvRow {
                n,
                l_n,
                l_2n,
                ratio: l_2n / l_n,
            }
        })
        .collect();
    let dev = |r: &SvRow| libm::fabs(r.ratio - 1.0);
    let max_deviation = rows.iter().map(dev).fold(0.0, f64::max);
    let final_deviation = rows.last().map(dev).unwrap_or(0.0);
    Ok(SvReport {
        rows,
        max_deviation,
        final_deviation,
    })
}
