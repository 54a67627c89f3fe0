use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Number of spacers placed above one column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpacerCount {
    Fixed(u64),
    /// `m * q_n` spacers, evaluated at the stage where it is used.
    HeightMultiple(u64),
}

/// One cutting-and-stacking stage: cut into `cuts` columns, then put
/// `spacers[k]` spacers over column `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    cuts: usize,
    spacers: Vec<SpacerCount>,
}

impl Stage {
    pub fn new(cuts: usize, spacers: Vec<SpacerCount>) -> Result<Self> {
        if cuts < 2 {
            return Err(Error::InvalidInput(format!("cutting number {cuts} < 2")));
        }
        if spacers.len() != cuts {
            return Err(Error::InvalidInput(format!(
                "stage with {cuts} columns lists {} spacer counts",
                spacers.len()
            )));
        }
        Ok(Stage { cuts, spacers })
    }

    pub fn fixed(cuts: usize, spacers: &[u64]) -> Result<Self> {
        Stage::new(
            cuts,
            spacers.iter().copied().map(SpacerCount::Fixed).collect(),
        )
    }

    pub fn cuts(&self) -> usize {
        self.cuts
    }

    pub fn spacers(&self) -> &[SpacerCount] {
        &self.spacers
    }
}

/// Rank-one construction data `(c_n; S_{n,1}, ..., S_{n,c_n})`, listed
/// finitely with an optional repeating suffix starting at `repeat_from`
/// (0-based index into `stages`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionData {
    stages: Vec<Stage>,
    repeat_from: Option<usize>,
}

impl ConstructionData {
    pub fn new(stages: Vec<Stage>, repeat_from: Option<usize>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::InvalidInput(
                "construction data has no stages".into(),
            ));
        }
        if let Some(r) = repeat_from {
            if r >= stages.len() {
                return Err(Error::InvalidInput(format!(
                    "repeat_from = {r} but only {} stages are listed",
                    stages.len()
                )));
            }
        }
        Ok(ConstructionData {
            stages,
            repeat_from,
        })
    }

    /// Dyadic odometer: `c_n = 2`, no spacers.
    pub fn odometer() -> Self {
        Self::periodic(Stage::fixed(2, &[0, 0]).unwrap())
    }

    /// Chacon's transformation: `c_n = 3`, spacers `(0, 1, 0)`.
    pub fn chacon() -> Self {
        Self::periodic(Stage::fixed(3, &[0, 1, 0]).unwrap())
    }

    /// `c_n = 2`, spacers `(0, 2 q_n)`; infinite total measure.
    pub fn heavy_spacer() -> Self {
        Self::periodic(
            Stage::new(
                2,
                vec![SpacerCount::Fixed(0), SpacerCount::HeightMultiple(2)],
            )
            .unwrap(),
        )
    }

    /// Named preset: `odometer`, `chacon` or `heavy2q`.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "odometer" => Some(Self::odometer()),
            "chacon" => Some(Self::chacon()),
            "heavy2q" => Some(Self::heavy_spacer()),
            _ => None,
        }
    }

    fn periodic(stage: Stage) -> Self {
        ConstructionData {
            stages: vec![stage],
            repeat_from: Some(0),
        }
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn repeat_from(&self) -> Option<usize> {
        self.repeat_from
    }

    /// Stage `n` (1-based).
    pub fn stage(&self, n: usize) -> Result<&Stage> {
        assert!(n >= 1, "stages are numbered from 1");
        let idx = n - 1;
        if idx < self.stages.len() {
            return Ok(&self.stages[idx]);
        }
        match self.repeat_from {
            Some(r) => {
                let period = self.stages.len() - r;
                Ok(&self.stages[r + (idx - r) % period])
            }
            None => Err(Error::StagesExhausted { level: n }),
        }
    }

    /// Whether every stage is defined.
    pub fn is_infinite(&self) -> bool {
        self.repeat_from.is_some()
    }

    /// `sup_n c_n`.
    pub fn max_cuts(&self) -> usize {
        self.stages.iter().map(Stage::cuts).max().unwrap_or(2)
    }
}
