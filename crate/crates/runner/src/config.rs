use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{RunError, RunResult};
use crate::formats::{Checkpoints, ConstructionSpec, DistSpec, Real, ScalingSpec};

fn one() -> u64 {
    1
}

fn unit() -> f64 {
    1.0
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// A complete, self-describing experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Master seed; trial `i` draws from stream `stream_seed(seed, i)`.
    #[serde(default)]
    pub seed: u64,
    /// Number of trials (independent orbits or samples).
    #[serde(default = "one")]
    pub trials: u64,
    /// Output directory; the current directory when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Experiment {
    /// Occupation counts of the base along random orbits.
    RankOne {
        construction: ConstructionSpec,
        checkpoints: Checkpoints,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        burn_in: Option<u64>,
    },
    /// `u_n` and `a_u(n)` up to `n`.
    Renewal { dist: DistSpec, n: u64 },
    /// Small-tail series up to `n`.
    Queen { dist: DistSpec, n: u64 },
    /// Dyadic tail series for `b = a^{-1}` and factor `t`.
    DyadicTail {
        dist: DistSpec,
        #[serde(default = "unit")]
        t: f64,
        n_max: u32,
    },
    /// Trimmed-sum ratios at horizon `n`.
    Trimmed { dist: DistSpec, n: u64 },
    /// Lattice counts of the translation action for each `n`.
    Translate {
        alpha: Real,
        #[serde(default = "real_one")]
        beta: Real,
        x: f64,
        n: Vec<u64>,
        #[serde(default, skip_serializing_if = "is_false")]
        allow_rational: bool,
    },
    /// Random-walk orbit counts at each `n`.
    Walk {
        dist: DistSpec,
        n: Vec<u64>,
        /// Steps per side; defaults to the largest `n`, which always covers.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        j: Option<usize>,
    },
    /// Band and slow-variation diagnostics.
    Regvar {
        scaling: ScalingSpec,
        p_values: Vec<u64>,
        n_lo: u64,
        n_hi: u64,
        #[serde(default = "two")]
        grid: u64,
    },
}

fn real_one() -> Real {
    Real::Value(1.0)
}

fn two() -> u64 {
    2
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::RankOne { .. } => "rank-one",
            Experiment::Renewal { .. } => "renewal",
            Experiment::Queen { .. } => "queen",
            Experiment::DyadicTail { .. } => "dyadic-tail",
            Experiment::Trimmed { .. } => "trimmed",
            Experiment::Translate { .. } => "translate",
            Experiment::Walk { .. } => "walk",
            Experiment::Regvar { .. } => "regvar",
        }
    }
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            seed: 0,
            trials: 1,
            out: None,
        }
    }

    pub fn from_json(text: &str) -> RunResult<Self> {
        serde_json::from_str(text).map_err(|e| RunError::Config(e.to_string()))
    }

    /// Reads a config; `finite:@file` references resolve relative to it.
    pub fn load(path: &Path) -> RunResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
        let config = Self::from_json(&text)?;
        config.resolve(path.parent().unwrap_or(Path::new(".")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Replaces file references by their contents.
    pub fn resolve(mut self, base: &Path) -> RunResult<Self> {
        match &mut self.experiment {
            Experiment::Renewal { dist, .. }
            | Experiment::Queen { dist, .. }
            | Experiment::DyadicTail { dist, .. }
            | Experiment::Trimmed { dist, .. }
            | Experiment::Walk { dist, .. } => *dist = dist.resolve(base)?,
            _ => {}
        }
        Ok(self)
    }

    /// SHA-256 of the canonical JSON form, without the output directory.
    pub fn hash(&self) -> String {
        let canonical = ExperimentConfig {
            out: None,
            ..self.clone()
        };
        hex::encode(Sha256::digest(canonical.to_json().as_bytes()))
    }

    /// Checks everything that can be checked without running.
    pub fn validate(&self) -> RunResult<()> {
        let bad = |m: String| Err(RunError::Config(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        match &self.experiment {
            Experiment::RankOne {
                construction,
                checkpoints,
                ..
            } => {
                construction.build()?;
                checkpoints.expand()?;
            }
            Experiment::Renewal { dist, n }
            | Experiment::Queen { dist, n }
            | Experiment::Trimmed { dist, n } => {
                dist.build()?;
                if *n == 0 {
                    return bad("horizon n must be positive".into());
                }
            }
            Experiment::DyadicTail { dist, t, .. } => {
                dist.build()?;
                if !(*t > 0.0 && t.is_finite()) {
                    return bad(format!("t = {t} must be positive"));
                }
            }
            Experiment::Translate { n, .. } | Experiment::Walk { n, .. } if n.is_empty() => {
                return bad("need at least one N".into());
            }
            Experiment::Translate { .. } => {}
            Experiment::Walk { dist, n, j } => {
                dist.build()?;
                if *j == Some(0) {
                    return bad("J must be at least 1".into());
                }
                if n.contains(&0) {
                    return bad("walk horizons must be positive".into());
                }
            }
            Experiment::Regvar {
                p_values,
                n_lo,
                n_hi,
                grid,
                ..
            } => {
                if p_values.is_empty() || p_values.iter().any(|&p| p < 2) {
                    return bad("p values must be integers >= 2".into());
                }
                if *n_lo == 0
                    || *grid < 2
                    || p_values.iter().any(|&p| p.saturating_mul(*n_lo) > *n_hi)
                {
                    return bad(format!(
                        "need n_lo >= 1, grid >= 2 and p * n_lo <= n_hi (got {n_lo}, {n_hi})"
                    ));
                }
            }
        }
        Ok(())
    }
}
