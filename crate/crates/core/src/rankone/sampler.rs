use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use super::data::ConstructionData;
use super::tower::Tower;
use super::word::Symbol;
use crate::rng::{self, StreamRng};
use crate::{Error, Result};

/// Default cap on the number of tower levels a window may need.
///
/// The window around the sampled point is unresolved at level `m` only when
/// the point lies within `radius` of an end of its copy of `B_m`. Once
/// `q_m > 2 * radius + 1`, staying unresolved for another level forces the
/// extreme column (first or last) to be chosen, which for `c_n >= 2` has
/// probability at most `1/2` per level. Hitting the default cap therefore has
/// probability below `2^-9000` for any data.
pub const DEFAULT_DEPTH_CAP: usize = 10_000;

/// Counts of base symbols in the window `[-r, r]` around the sampled point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowCounts {
    /// Base symbols at positions `-r ..= -1`.
    pub left: u64,
    /// Always 1: points are sampled from the base.
    pub center: u64,
    /// Base symbols at positions `1 ..= r`.
    pub right: u64,
}

impl WindowCounts {
    /// Two-sided sum over `|k| <= r`.
    pub fn sigma(&self) -> u64 {
        self.left + self.center + self.right
    }

    /// Forward sum over `0 <= k <= r`.
    pub fn forward(&self) -> u64 {
        self.center + self.right
    }

    /// Backward sum over `-r <= k <= 0`.
    pub fn backward(&self) -> u64 {
        self.center + self.left
    }
}

/// Lazily generated bi-infinite name of a random point of the base interval.
///
/// Level `n` records where the point sits inside `B_n`. Going up one level
/// picks the column `k_n` the point falls in, uniformly on `1..=c_n`, and
/// shifts the offset by `(k_n - 1) q_n + S_{n,1} + ... + S_{n,k_n - 1}`.
#[derive(Debug, Clone)]
pub struct NameSampler {
    tower: Tower,
    choices: Vec<usize>,
    offsets: Vec<BigUint>,
    forced: Vec<usize>,
    rng: StreamRng,
    seed: u64,
    depth_cap: usize,
}

impl NameSampler {
    pub fn new(data: ConstructionData, seed: u64) -> Self {
        NameSampler {
            tower: Tower::new(data),
            choices: Vec::new(),
            offsets: alloc::vec![BigUint::zero()],
            forced: Vec::new(),
            rng: rng::stream(seed),
            seed,
            depth_cap: DEFAULT_DEPTH_CAP,
        }
    }

    /// A sampler whose first column choices are fixed (1-based, one per stage).
    pub fn with_forced(data: ConstructionData, seed: u64, forced: Vec<usize>) -> Result<Self> {
        for (i, &k) in forced.iter().enumerate() {
            let c = data.stage(i + 1)?.cuts();
            if k == 0 || k > c {
                return Err(Error::InvalidInput(format!(
                    "forced column {k} at stage {} outside 1..={c}",
                    i + 1
                )));
            }
        }
        let mut s = Self::new(data, seed);
        s.forced = forced;
        Ok(s)
    }

    pub fn with_depth_cap(mut self, cap: usize) -> Self {
        self.depth_cap = cap;
        self
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn data(&self) -> &ConstructionData {
        self.tower.data()
    }

    /// Highest realized level.
    pub fn level(&self) -> usize {
        self.offsets.len()
    }

    /// Column choices `k_1, k_2, ...` drawn so far.
    pub fn column_choices(&self) -> &[usize] {
        &self.choices
    }

    /// Position of the point inside `B_level`.
    pub fn center_offset(&self, level: usize) -> &BigUint {
        &self.offsets[level - 1]
    }

    /// `q_level`, for a realized level.
    pub fn height(&self, level: usize) -> &BigUint {
        self.tower.height(level)
    }

    /// Realizes one more level.
    pub fn extend(&mut self) -> Result<()> {
        let n = self.level();
        self.tower.ensure(n + 1)?;
        let c = self.tower.data().stage(n)?.cuts();
        let k = match self.forced.get(n - 1) {
            Some(&k) => k,
            None => self.rng.gen_range(1..=c),
        };
        let mut offset = &self.offsets[n - 1] + self.tower.height(n) * (k - 1);
        for s in &self.tower.spacers[n - 1][..k - 1] {
            offset += s;
        }
        self.choices.push(k);
        self.offsets.push(offset);
        Ok(())
    }

    /// Smallest level whose copy of `B_m` around the point contains the
    /// whole window `[-radius, radius]`, realizing levels as needed.
    pub fn embed(&mut self, radius: u64) -> Result<usize> {
        let r = BigUint::from(radius);
        let mut m = 1;
        loop {
            while m > self.level() {
                if self.level() >= self.depth_cap {
                    return Err(Error::DepthCap {
                        cap: self.depth_cap,
                        radius,
                    });
                }
                self.extend()?;
            }
            let o = &self.offsets[m - 1];
            if *o >= r && o + &r < *self.tower.height(m) {
                return Ok(m);
            }
            m += 1;
        }
    }

    /// Base-symbol counts in `[-radius, -1]`, `{0}` and `[1, radius]`.
    pub fn window_counts(&mut self, radius: u64) -> Result<WindowCounts> {
        let m = self.embed(radius)?;
        let o = &self.offsets[m - 1];
        let r = BigUint::from(radius);
        let at = |j: &BigUint| self.tower.prefix_base(m, j);
        let left = at(o) - at(&(o - &r));
        let right = at(&(o + &r + 1u32)) - at(&(o + 1u32));
        Ok(WindowCounts {
            left: u64::try_from(left).expect("count bounded by radius"),
            center: 1,
            right: u64::try_from(right).expect("count bounded by radius"),
        })
    }

    /// Explicit symbols at positions `-radius ..= radius`.
    pub fn window_symbols(&mut self, radius: u64) -> Result<Vec<Symbol>> {
        let m = self.embed(radius)?;
        let o = &self.offsets[m - 1];
        let r = BigUint::from(radius);
        let mut out = Vec::with_capacity((2 * radius + 1) as usize);
        self.tower.extract(m, &(o - &r), &(o + &r + 1u32), &mut out);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::word::expand_word;
    use super::*;

    fn offset(s: &NameSampler, level: usize) -> u64 {
        u64::try_from(s.center_offset(level)).unwrap()
    }

    #[test]
    fn forced_chacon_offset() {
        let mut s =
            NameSampler::with_forced(ConstructionData::chacon(), 0, alloc::vec![3]).unwrap();
        s.extend().unwrap();
        assert_eq!(offset(&s, 2), 3);
        let w = expand_word(&ConstructionData::chacon(), 2).unwrap();
        assert_eq!(w.symbols()[3], Symbol::Base);
    }

    #[test]
    fn forced_first_column_keeps_offset() {
        let mut s =
            NameSampler::with_forced(ConstructionData::heavy_spacer(), 0, alloc::vec![1]).unwrap();
        s.extend().unwrap();
        assert_eq!(offset(&s, 2), 0);
    }

    #[test]
    fn forced_choice_out_of_range() {
        assert!(NameSampler::with_forced(ConstructionData::odometer(), 0, alloc::vec![3]).is_err());
    }

    #[test]
    fn odometer_windows_are_full() {
        for seed in 0..5 {
            let mut s = NameSampler::new(ConstructionData::odometer(), seed);
            assert_eq!(s.window_counts(8).unwrap().sigma(), 17);
            assert!(s
                .window_symbols(8)
                .unwrap()
                .iter()
                .all(|&x| x == Symbol::Base));
        }
    }

    #[test]
    fn radius_zero_is_center() {
        let mut s = NameSampler::new(ConstructionData::heavy_spacer(), 9);
        let w = s.window_counts(0).unwrap();
        assert_eq!((w.left, w.center, w.right), (0, 1, 0));
    }

    #[test]
    fn embedding_consistency() {
        let data = ConstructionData::chacon();
        let mut s = NameSampler::new(data.clone(), 11);
        for _ in 0..7 {
            s.extend().unwrap();
        }
        for level in 1..=s.level() {
            let w = expand_word(&data, level).unwrap();
            assert_eq!(w.symbols()[offset(&s, level) as usize], Symbol::Base);
        }
    }

    #[test]
    fn depth_cap_is_an_error() {
        // Always choosing the first column keeps the point at offset 0.
        let forced = alloc::vec![1; 40];
        let mut s = NameSampler::with_forced(ConstructionData::odometer(), 0, forced)
            .unwrap()
            .with_depth_cap(30);
        assert_eq!(
            s.window_counts(1),
            Err(Error::DepthCap { cap: 30, radius: 1 })
        );
    }

    #[test]
    fn finite_data_exhaustion_surfaces() {
        let stage = super::super::data::Stage::fixed(2, &[0, 0]).unwrap();
        let data = ConstructionData::new(alloc::vec![stage], None).unwrap();
        let mut s = NameSampler::new(data, 0);
        assert!(matches!(
            s.window_counts(5),
            Err(Error::StagesExhausted { .. })
        ));
    }

    #[test]
    fn deterministic_per_seed() {
        let mut a = NameSampler::new(ConstructionData::chacon(), 42);
        let mut b = NameSampler::new(ConstructionData::chacon(), 42);
        assert_eq!(
            a.window_counts(1000).unwrap(),
            b.window_counts(1000).unwrap()
        );
        assert_eq!(a.column_choices(), b.column_choices());
    }

    #[test]
    fn huge_radius_without_materialization() {
        let mut s = NameSampler::new(ConstructionData::odometer(), 3);
        let w = s.window_counts(1 << 40).unwrap();
        assert_eq!(w.sigma(), (1u64 << 41) + 1);
    }
}
