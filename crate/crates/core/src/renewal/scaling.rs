use super::distribution::LifetimeDistribution;
use crate::regvar::generalized_inverse;
use crate::Result;

/// Default search horizon for `b`.
pub const DEFAULT_INVERSE_HORIZON: u64 = 1 << 62;

/// `L(n) = E(ν ∧ n)`, `a(n) = n / L(n)` and `b(y) = min { t : a(t) >= y }`.
///
/// `L(n)/n` is the average of the nonincreasing `F(1..=n)`, so `a` is
/// nondecreasing and `b` is found by doubling then bisection.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedMeanScaling {
    dist: LifetimeDistribution,
    horizon: u64,
}

impl TruncatedMeanScaling {
    pub fn new(dist: LifetimeDistribution) -> Self {
        TruncatedMeanScaling {
            dist,
            horizon: DEFAULT_INVERSE_HORIZON,
        }
    }

    pub fn with_horizon(&self, horizon: u64) -> Self {
        TruncatedMeanScaling {
            dist: self.dist.clone(),
            horizon,
        }
    }

    pub fn distribution(&self) -> &LifetimeDistribution {
        &self.dist
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn l(&self, n: u64) -> f64 {
        self.dist.truncated_mean(n)
    }

    pub fn a(&self, n: u64) -> f64 {
        n as f64 / self.l(n)
    }

    pub fn b(&self, y: f64) -> Result<u64> {
        generalized_inverse(|t| Some(self.a(t)), y, self.horizon)
    }
}

/// Truncated-mean scaling of `f`.
pub fn truncated_mean_scaling(f: &LifetimeDistribution) -> TruncatedMeanScaling {
    TruncatedMeanScaling::new(f.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn delta_one_is_identity() {
        let s = truncated_mean_scaling(&LifetimeDistribution::delta(1).unwrap());
        for n in 1..100 {
            assert_eq!(s.l(n), 1.0);
            assert_eq!(s.a(n), n as f64);
        }
        for &y in &[0.5, 1.0, 1.5, 2.0, 17.2, 1000.0] {
            assert_eq!(s.b(y).unwrap(), y.ceil().max(1.0) as u64);
        }
    }

    #[test]
    fn harmonic_values() {
        let s = truncated_mean_scaling(&LifetimeDistribution::harmonic());
        assert!((s.l(4) - 25.0 / 12.0).abs() < 1e-15);
        // Oracle: first t with t / H_t >= 10 by direct scan.
        let mut h = 0.0;
        let mut scan = 0;
        for t in 1..1000u64 {
            h += 1.0 / t as f64;
            if t as f64 / h >= 10.0 {
                scan = t;
                break;
            }
        }
        assert_eq!(scan, 44);
        assert_eq!(s.b(10.0).unwrap(), 44);
    }

    #[test]
    fn inverse_contract() {
        for f in [
            LifetimeDistribution::harmonic(),
            LifetimeDistribution::geometric(0.3).unwrap(),
            LifetimeDistribution::power_tail(0.5).unwrap(),
            LifetimeDistribution::finite(alloc::vec![(1, 0.25), (7, 0.75)]).unwrap(),
        ] {
            let s = truncated_mean_scaling(&f);
            for y in 2..=1000 {
                let y = y as f64;
                let b = s.b(y).unwrap();
                assert!(s.a(b) >= y);
                assert!(b == 1 || s.a(b - 1) < y, "{f:?} y={y}");
            }
        }
    }

    #[test]
    fn a_is_nondecreasing() {
        for f in [
            LifetimeDistribution::harmonic(),
            LifetimeDistribution::power_tail(0.3).unwrap(),
        ] {
            let s = truncated_mean_scaling(&f);
            let mut prev = 0.0;
            for n in 1..5000 {
                let a = s.a(n);
                assert!(a >= prev, "{f:?} at {n}");
                prev = a;
            }
        }
    }

    #[test]
    fn horizon_error() {
        let s = truncated_mean_scaling(&LifetimeDistribution::harmonic()).with_horizon(1000);
        assert_eq!(
            s.b(1e6),
            Err(Error::Horizon {
                target: 1e6,
                horizon: 1000
            })
        );
    }
}
