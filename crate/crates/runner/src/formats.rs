//! Text and JSON forms of construction data, lifetime distributions,
//! scaling sequences and checkpoint lists.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use birklab_core::birkhoff::dyadic_checkpoints;
use birklab_core::lattice::{GOLDEN_RATIO, SQRT_2};
use birklab_core::rankone::{rank_one_scaling, ConstructionData, SpacerCount, Stage};
use birklab_core::regvar::ClosedForm;
use birklab_core::renewal::{renewal_sequence, truncated_mean_scaling, LifetimeDistribution};
use birklab_core::ScalingSequence;
use serde::{Deserialize, Serialize};

use crate::error::{RunError, RunResult};

fn config_err(msg: impl Into<String>) -> RunError {
    RunError::Config(msg.into())
}

fn read_file(path: &Path) -> RunResult<String> {
    std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))
}

/// One spacer entry: a count, or `"<m>q"` for `m` times the current height.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpacerEntry {
    Fixed(u64),
    Multiple(#[serde(with = "height_multiple")] u64),
}

mod height_multiple {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{m}q"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let s = String::deserialize(d)?;
        let body = s
            .strip_suffix('q')
            .ok_or_else(|| D::Error::custom(format!("bad spacer count {s:?}")))?;
        if body.is_empty() {
            return Ok(1);
        }
        body.parse()
            .map_err(|_| D::Error::custom(format!("bad spacer count {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageFile {
    pub c: usize,
    pub spacers: Vec<SpacerEntry>,
}

/// `{"stages": [{"c": 3, "spacers": [0, 1, 0]}], "repeat_from": 0}`.
/// Without `repeat_from` the data are finite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionFile {
    pub stages: Vec<StageFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repeat_from: Option<usize>,
}

impl ConstructionFile {
    pub fn build(&self) -> RunResult<ConstructionData> {
        let stages = self
            .stages
            .iter()
            .map(|s| {
                let spacers = s
                    .spacers
                    .iter()
                    .map(|e| match *e {
                        SpacerEntry::Fixed(v) => SpacerCount::Fixed(v),
                        SpacerEntry::Multiple(m) => SpacerCount::HeightMultiple(m),
                    })
                    .collect();
                Stage::new(s.c, spacers)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ConstructionData::new(stages, self.repeat_from)?)
    }
}

/// A named preset or inline construction data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConstructionSpec {
    Preset(String),
    Inline(ConstructionFile),
}

impl ConstructionSpec {
    pub fn build(&self) -> RunResult<ConstructionData> {
        match self {
            ConstructionSpec::Preset(name) => ConstructionData::preset(name).ok_or_else(|| {
                config_err(format!(
                    "unknown preset {name:?} (odometer, chacon, heavy2q)"
                ))
            }),
            ConstructionSpec::Inline(file) => file.build(),
        }
    }

    pub fn load(path: &Path) -> RunResult<Self> {
        let file: ConstructionFile = serde_json::from_str(&read_file(path)?)
            .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        file.build()?;
        Ok(ConstructionSpec::Inline(file))
    }
}

/// JSON form of a lifetime distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LifetimeFile {
    Geometric {
        p: f64,
    },
    PowerTail {
        gamma: f64,
    },
    Harmonic,
    Delta {
        k: u64,
    },
    /// `[[k, mass], ...]`.
    Finite {
        masses: Vec<(u64, f64)>,
    },
}

impl LifetimeFile {
    pub fn build(&self) -> RunResult<LifetimeDistribution> {
        Ok(match self {
            LifetimeFile::Geometric { p } => LifetimeDistribution::geometric(*p)?,
            LifetimeFile::PowerTail { gamma } => LifetimeDistribution::power_tail(*gamma)?,
            LifetimeFile::Harmonic => LifetimeDistribution::harmonic(),
            LifetimeFile::Delta { k } => LifetimeDistribution::delta(*k)?,
            LifetimeFile::Finite { masses } => LifetimeDistribution::finite(masses.clone())?,
        })
    }
}

/// A distribution given as `geometric:p`, `power:gamma`, `harmonic`,
/// `delta:k` or `finite:@file`, or inline JSON. File references are
/// replaced by their contents on [`resolve`](Self::resolve).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistSpec {
    Text(String),
    Inline(LifetimeFile),
}

impl DistSpec {
    pub fn resolve(&self, base: &Path) -> RunResult<DistSpec> {
        match self {
            DistSpec::Text(t) => match t.strip_prefix("finite:@") {
                Some(file) => {
                    let path = base.join(file);
                    let f: LifetimeFile = serde_json::from_str(&read_file(&path)?)
                        .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
                    Ok(DistSpec::Inline(f))
                }
                None => {
                    parse_dist_text(t)?;
                    Ok(self.clone())
                }
            },
            DistSpec::Inline(_) => Ok(self.clone()),
        }
    }

    pub fn build(&self) -> RunResult<LifetimeDistribution> {
        match self {
            DistSpec::Text(t) => parse_dist_text(t)?.build(),
            DistSpec::Inline(f) => f.build(),
        }
    }
}

fn parse_dist_text(t: &str) -> RunResult<LifetimeFile> {
    let (name, arg) = t.split_once(':').unwrap_or((t, ""));
    let num = |what: &str| -> RunResult<f64> {
        arg.parse()
            .map_err(|_| config_err(format!("{name} needs a numeric {what}, got {arg:?}")))
    };
    match name {
        "geometric" => Ok(LifetimeFile::Geometric { p: num("p")? }),
        "power" => Ok(LifetimeFile::PowerTail {
            gamma: num("gamma")?,
        }),
        "harmonic" if arg.is_empty() => Ok(LifetimeFile::Harmonic),
        "delta" => Ok(LifetimeFile::Delta {
            k: arg
                .parse()
                .map_err(|_| config_err(format!("delta needs an integer, got {arg:?}")))?,
        }),
        "finite" => Err(config_err(format!(
            "finite distributions are given as finite:@FILE, got {t:?}"
        ))),
        _ => Err(config_err(format!(
            "unknown distribution {t:?} (geometric:p, power:gamma, harmonic, delta:k, finite:@file)"
        ))),
    }
}

/// `identity`, `sqrt_ceil`, `n_over_harmonic`, `renewal:<dist>`,
/// `truncated-mean:<dist>` or `rank-one:<preset>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScalingSpec(pub String);

/// Built scaling together with `L` when it is a truncated mean.
pub struct BuiltScaling {
    pub sequence: ScalingSequence,
    pub truncated_mean: Option<LifetimeDistribution>,
}

impl ScalingSpec {
    /// `renewal` scalings are tabulated up to `n_max`.
    pub fn build(&self, n_max: u64) -> RunResult<BuiltScaling> {
        let s = self.0.as_str();
        if let Some(form) = ClosedForm::from_name(s) {
            return Ok(BuiltScaling {
                sequence: ScalingSequence::closed_form(form),
                truncated_mean: None,
            });
        }
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "renewal" => {
                let f = DistSpec::Text(arg.into()).build()?;
                let n = usize::try_from(n_max).map_err(|_| config_err("renewal table too long"))?;
                Ok(BuiltScaling {
                    sequence: ScalingSequence::renewal(&renewal_sequence(&f, n)),
                    truncated_mean: None,
                })
            }
            "truncated-mean" => {
                let f = DistSpec::Text(arg.into()).build()?;
                Ok(BuiltScaling {
                    sequence: ScalingSequence::truncated_mean(truncated_mean_scaling(&f)),
                    truncated_mean: Some(f),
                })
            }
            "rank-one" => {
                let data = ConstructionSpec::Preset(arg.into()).build()?;
                Ok(BuiltScaling {
                    sequence: rank_one_scaling(&data),
                    truncated_mean: None,
                })
            }
            _ => Err(config_err(format!("unknown scaling {s:?}"))),
        }
    }
}

/// `dyadic:LO:HI` or an explicit increasing list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Checkpoints {
    Text(String),
    List(Vec<u64>),
}

impl Checkpoints {
    pub fn expand(&self) -> RunResult<Vec<u64>> {
        let list = match self {
            Checkpoints::List(v) => v.clone(),
            Checkpoints::Text(t) => {
                let parts: Vec<&str> = t.split(':').collect();
                match parts.as_slice() {
                    ["dyadic", lo, hi] => {
                        let lo: u32 = lo
                            .parse()
                            .map_err(|_| config_err(format!("bad checkpoints {t:?}")))?;
                        let hi: u32 = hi
                            .parse()
                            .map_err(|_| config_err(format!("bad checkpoints {t:?}")))?;
                        if lo > hi || hi > 62 {
                            return Err(config_err(format!("need LO <= HI <= 62 in {t:?}")));
                        }
                        dyadic_checkpoints(lo, hi)
                    }
                    _ => t
                        .split(',')
                        .map(|v| {
                            v.trim()
                                .parse::<u64>()
                                .map_err(|_| config_err(format!("bad checkpoints {t:?}")))
                        })
                        .collect::<RunResult<Vec<u64>>>()?,
                }
            }
        };
        if list.is_empty() || !list.windows(2).all(|w| w[0] < w[1]) {
            return Err(config_err("checkpoints must be a nonempty increasing list"));
        }
        Ok(list)
    }
}

/// A real number or one of the named constants `golden`, `sqrt2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Real {
    Golden,
    Sqrt2,
    Value(f64),
}

impl Real {
    pub fn value(self) -> f64 {
        match self {
            Real::Golden => GOLDEN_RATIO,
            Real::Sqrt2 => SQRT_2,
            Real::Value(v) => v,
        }
    }
}

impl FromStr for Real {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "golden" => Ok(Real::Golden),
            "sqrt2" => Ok(Real::Sqrt2),
            _ => s
                .parse()
                .map(Real::Value)
                .map_err(|_| format!("expected a number, golden or sqrt2, got {s:?}")),
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Golden => f.write_str("golden"),
            Real::Sqrt2 => f.write_str("sqrt2"),
            Real::Value(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Real {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Real::Value(v) => s.serialize_f64(*v),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Name(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Real::Value(v)),
            Raw::Name(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
