//! Checkpointed occupation counts along an orbit and finite-horizon
//! estimators of the normalized ratios `S_n / a(n)` and `Σ_n / 2a(n)`.

use alloc::format;
use alloc::vec::Vec;

use crate::lattice::WalkSample;
use crate::rankone::NameSampler;
use crate::regvar::ScalingSequence;
use crate::{Error, Result};

/// Occupation counts of one orbit at increasing checkpoints `n`:
/// `S_n⁺ = #{0 <= k <= n}`, `S_n⁻ = #{-n <= k <= 0}` and
/// `Σ_n = #{|k| <= n}`, counting times at which the orbit is in the set.
///
/// When the starting point is itself in the set, time 0 is counted in both
/// one-sided sums and once in `Σ_n`, so `Σ_n = S_n⁺ + S_n⁻ - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BirkhoffSeries {
    pub seed: u64,
    pub checkpoints: Vec<u64>,
    pub s_plus: Vec<u64>,
    pub s_minus: Vec<u64>,
    pub sigma: Vec<u64>,
    pub center_is_occurrence: bool,
}

impl BirkhoffSeries {
    pub fn len(&self) -> usize {
        self.checkpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checkpoints.is_empty()
    }

    /// Checks monotonicity, the center convention and `Σ_n <= 2n + 1`.
    pub fn check_invariants(&self) -> Result<()> {
        let overlap = u64::from(self.center_is_occurrence);
        let nondecreasing = |v: &[u64]| v.windows(2).all(|w| w[0] <= w[1]);
        if !self.checkpoints.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Invariant("checkpoints not increasing".into()));
        }
        if !(nondecreasing(&self.s_plus)
            && nondecreasing(&self.s_minus)
            && nondecreasing(&self.sigma))
        {
            return Err(Error::Invariant(format!(
                "counts not nondecreasing in series {}",
                self.seed
            )));
        }
        for i in 0..self.len() {
            let n = self.checkpoints[i];
            if self.sigma[i] + overlap != self.s_plus[i] + self.s_minus[i] {
                return Err(Error::Invariant(format!(
                    "center convention broken at n = {n}"
                )));
            }
            if self.sigma[i] > 2 * n + 1 {
                return Err(Error::Invariant(format!(
                    "sigma {} > 2n + 1 at n = {n}",
                    self.sigma[i]
                )));
            }
        }
        Ok(())
    }
}

/// `2^lo, 2^(lo+1), ..., 2^hi`.
pub fn dyadic_checkpoints(lo: u32, hi: u32) -> Vec<u64> {
    assert!(lo <= hi && hi < 63);
    (lo..=hi).map(|e| 1u64 << e).collect()
}

fn check_checkpoints(checkpoints: &[u64]) -> Result<()> {
    if checkpoints.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(Error::InvalidInput(
            "checkpoints must be strictly increasing".into(),
        ))
    }
}

/// Counts along the orbit of the sampled base point of a rank-one
/// transformation, with the set being the base.
pub fn series_from_name(sampler: &mut NameSampler, checkpoints: &[u64]) -> Result<BirkhoffSeries> {
    check_checkpoints(checkpoints)?;
    let mut series = BirkhoffSeries {
        seed: sampler.seed(),
        checkpoints: checkpoints.to_vec(),
        s_plus: Vec::with_capacity(checkpoints.len()),
        s_minus: Vec::with_capacity(checkpoints.len()),
        sigma: Vec::with_capacity(checkpoints.len()),
        center_is_occurrence: true,
    };
    for &n in checkpoints {
        let w = sampler.window_counts(n)?;
        series.s_plus.push(w.forward());
        series.s_minus.push(w.backward());
        series.sigma.push(w.sigma());
    }
    Ok(series)
}

/// Counts for the zero section of the random-walk skew product, read off
/// the interarrival times: `Σ_n = #{k : |s_k| <= n}`.
pub fn series_from_walk(walk: &WalkSample, checkpoints: &[u64]) -> Result<BirkhoffSeries> {
    check_checkpoints(checkpoints)?;
    let mut series = BirkhoffSeries {
        seed: walk.seed(),
        checkpoints: checkpoints.to_vec(),
        s_plus: Vec::with_capacity(checkpoints.len()),
        s_minus: Vec::with_capacity(checkpoints.len()),
        sigma: Vec::with_capacity(checkpoints.len()),
        center_is_occurrence: true,
    };
    for &n in checkpoints {
        let sigma = walk.count_within(n)?;
        let (plus, minus) = walk.one_sided_counts(n)?;
        series.s_plus.push(plus);
        series.s_minus.push(minus);
        series.sigma.push(sigma);
    }
    Ok(series)
}

/// Normalized ratios of one series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesStats {
    pub seed: u64,
    pub a_n: Vec<f64>,
    /// `Σ_n / 2a(n)`.
    pub ratio_sym: Vec<f64>,
    /// `S_n⁺ / a(n)`.
    pub ratio_plus: Vec<f64>,
    /// Largest symmetric ratio at checkpoints `>= burn_in`.
    pub running_sup: f64,
    /// Smallest symmetric ratio at checkpoints `>= burn_in`.
    pub running_inf: f64,
    pub oscillation: f64,
    /// Largest forward ratio at checkpoints `>= burn_in`.
    pub sup_plus: f64,
}

/// Ensemble summary. All estimators are finite-horizon stand-ins for
/// limits superior and inferior, taken past the burn-in up to the last
/// checkpoint; they are lower bounds for `α`, `β` and an upper bound for
/// `β̲` only in the limit of long horizons.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedStats {
    pub per_series: Vec<SeriesStats>,
    pub burn_in: u64,
    /// Last checkpoint.
    pub horizon: u64,
    /// Largest `sup S_n⁺ / a(n)` over the ensemble.
    pub alpha_hat: f64,
    /// Largest `sup Σ_n / 2a(n)` over the ensemble.
    pub beta_hat: f64,
    /// Smallest `inf Σ_n / 2a(n)` over the ensemble.
    pub beta_lower_hat: f64,
    /// Set when `beta_lower_hat > alpha_hat / 2 + 0.1`. The limiting
    /// quantities satisfy the inequality; a finite horizon may not.
    pub flagged: bool,
}

impl NormalizedStats {
    pub fn oscillations(&self) -> impl Iterator<Item = f64> + '_ {
        self.per_series.iter().map(|s| s.oscillation)
    }
}

/// Ratios and estimators for an ensemble of series sharing checkpoints.
pub fn normalized_stats(
    ensemble: &[BirkhoffSeries],
    scaling: &ScalingSequence,
    burn_in: u64,
) -> Result<NormalizedStats> {
    let first = ensemble
        .first()
        .ok_or_else(|| Error::InvalidInput("empty ensemble".into()))?;
    let checkpoints = &first.checkpoints;
    if ensemble.iter().any(|s| s.checkpoints != *checkpoints) {
        return Err(Error::InvalidInput(
            "series have different checkpoints".into(),
        ));
    }
    if !checkpoints.iter().any(|&n| n >= burn_in) {
        return Err(Error::InvalidInput(format!(
            "no checkpoint at or past burn-in {burn_in}"
        )));
    }
    let a_n = checkpoints
        .iter()
        .map(|&n| {
            let a = scaling.get(n)?;
            if a > 0.0 {
                Ok(a)
            } else {
                Err(Error::InvalidInput(format!("a({n}) = {a} is not positive")))
            }
        })
        .collect::<Result<Vec<f64>>>()?;

    let per_series: Vec<SeriesStats> = ensemble
        .iter()
        .map(|s| {
            let ratio_sym: Vec<f64> = s
                .sigma
                .iter()
                .zip(&a_n)
                .map(|(&x, a)| x as f64 / (2.0 * a))
                .collect();
            let ratio_plus: Vec<f64> = s
                .s_plus
                .iter()
                .zip(&a_n)
                .map(|(&x, a)| x as f64 / a)
                .collect();
            let past = |v: &[f64]| -> Vec<f64> {
                checkpoints
                    .iter()
                    .zip(v)
                    .filter(|(&n, _)| n >= burn_in)
                    .map(|(_, &r)| r)
                    .collect()
            };
            let sym = past(&ratio_sym);
            let running_sup = sym.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let running_inf = sym.iter().copied().fold(f64::INFINITY, f64::min);
            let sup_plus = past(&ratio_plus)
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max);
            SeriesStats {
                seed: s.seed,
                a_n: a_n.clone(),
                ratio_sym,
                ratio_plus,
                running_sup,
                running_inf,
                oscillation: running_sup - running_inf,
                sup_plus,
            }
        })
        .collect();

    let alpha_hat = per_series
        .iter()
        .map(|s| s.sup_plus)
        .fold(f64::NEG_INFINITY, f64::max);
    let beta_hat = per_series
        .iter()
        .map(|s| s.running_sup)
        .fold(f64::NEG_INFINITY, f64::max);
    let beta_lower_hat = per_series
        .iter()
        .map(|s| s.running_inf)
        .fold(f64::INFINITY, f64::min);
    Ok(NormalizedStats {
        per_series,
        burn_in,
        horizon: *checkpoints.last().expect("nonempty"),
        alpha_hat,
        beta_hat,
        beta_lower_hat,
        flagged: beta_lower_hat > alpha_hat / 2.0 + 0.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::walk_sample;
    use crate::rankone::{rank_one_scaling, ConstructionData};
    use crate::regvar::ClosedForm;
    use crate::renewal::LifetimeDistribution;

    #[test]
    fn odometer_counts_everything() {
        let mut s = NameSampler::new(ConstructionData::odometer(), 5);
        let series = series_from_name(&mut s, &[0, 1, 2, 4]).unwrap();
        assert_eq!(series.sigma, [1, 3, 5, 9]);
        assert_eq!(series.s_plus, [1, 2, 3, 5]);
        series.check_invariants().unwrap();
    }

    #[test]
    fn odometer_symmetric_ratio_is_bounded() {
        let data = ConstructionData::odometer();
        let a = rank_one_scaling(&data);
        let ensemble: Vec<_> = (0..4)
            .map(|seed| {
                series_from_name(
                    &mut NameSampler::new(data.clone(), seed),
                    &dyadic_checkpoints(4, 20),
                )
                .unwrap()
            })
            .collect();
        let stats = normalized_stats(&ensemble, &a, 16).unwrap();
        for s in &stats.per_series {
            for &r in &s.ratio_sym {
                assert!((0.5..1.1).contains(&r), "{r}");
            }
        }
    }

    #[test]
    fn chacon_window_in_range() {
        for seed in 0..10 {
            let mut s = NameSampler::new(ConstructionData::chacon(), seed);
            let series = series_from_name(&mut s, &[13]).unwrap();
            assert!((9..=27).contains(&series.sigma[0]));
        }
    }

    #[test]
    fn unit_walk_has_exact_ratios() {
        let f = LifetimeDistribution::delta(1).unwrap();
        let w = walk_sample(&f, 0, 1 << 12).unwrap();
        let series = series_from_walk(&w, &dyadic_checkpoints(0, 12)).unwrap();
        series.check_invariants().unwrap();
        assert_eq!(series_from_walk(&w, &[5]).unwrap().sigma, [11]);
        let stats = normalized_stats(
            &[series],
            &ScalingSequence::closed_form(ClosedForm::Identity),
            1 << 8,
        )
        .unwrap();
        let s = &stats.per_series[0];
        assert!((s.running_sup - 1.0).abs() < 0.01 && s.oscillation < 0.01);
    }

    #[test]
    fn estimators_are_monotone_in_the_ensemble() {
        let data = ConstructionData::heavy_spacer();
        let a = rank_one_scaling(&data);
        let cps = dyadic_checkpoints(4, 16);
        let ensemble: Vec<_> = (0..8)
            .map(|seed| series_from_name(&mut NameSampler::new(data.clone(), seed), &cps).unwrap())
            .collect();
        let mut prev: Option<NormalizedStats> = None;
        for k in 1..=ensemble.len() {
            let st = normalized_stats(&ensemble[..k], &a, 16).unwrap();
            if let Some(p) = prev {
                assert!(st.alpha_hat >= p.alpha_hat && st.beta_hat >= p.beta_hat);
                assert!(st.beta_lower_hat <= p.beta_lower_hat);
            }
            for s in &st.per_series {
                assert!(s.running_sup >= s.running_inf && s.running_inf >= 0.0);
            }
            prev = Some(st);
        }
    }

    #[test]
    fn heavy_spacer_dyadic_ratios() {
        // Checkpoints 2^k are q_v and 2 q_v; at 2 q_v the window holds
        // exactly the point's pair of copies.
        let data = ConstructionData::heavy_spacer();
        let a = rank_one_scaling(&data);
        let cps = dyadic_checkpoints(4, 18);
        for seed in 0..10 {
            let series = series_from_name(&mut NameSampler::new(data.clone(), seed), &cps).unwrap();
            let st = normalized_stats(&[series], &a, 16).unwrap();
            let s = &st.per_series[0];
            for (k, &r) in s.ratio_sym.iter().enumerate() {
                if (k + 4) % 2 == 1 {
                    assert_eq!(r, 0.5);
                } else {
                    assert!(r > 0.25 && r <= 0.5, "{r}");
                }
            }
            assert!(s.oscillation < 0.25);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut s = NameSampler::new(ConstructionData::odometer(), 0);
        assert!(series_from_name(&mut s, &[4, 2]).is_err());
        assert!(
            normalized_stats(&[], &ScalingSequence::closed_form(ClosedForm::Identity), 0).is_err()
        );
        let series = series_from_name(&mut s, &[1, 2]).unwrap();
        assert!(normalized_stats(
            &[series],
            &ScalingSequence::closed_form(ClosedForm::Identity),
            4
        )
        .is_err());
    }
}
