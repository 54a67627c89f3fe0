//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if
//! any criterion fails.

use std::path::Path;
use std::time::Instant;

use birklab::config::{Experiment, ExperimentConfig};
use birklab::formats::{Checkpoints, ConstructionSpec, DistSpec};
use birklab::{run, RunOptions};
use birklab_core::birkhoff::{
    dyadic_checkpoints, normalized_stats, series_from_name, series_from_walk, BirkhoffSeries,
};
use birklab_core::lattice::{
    translate_counts, walk_counts, walk_sample, TranslationAction, GOLDEN_RATIO,
};
use birklab_core::numeric::harmonic;
use birklab_core::rankone::{
    expand_word, rank_one_scaling, tower_stats, ConstructionData, NameSampler, SpacerCount, Symbol,
    DEFAULT_EXPANSION_BUDGET,
};
use birklab_core::regvar::{er_diagnostic, ClosedForm, ErOptions};
use birklab_core::renewal::{
    queen_series, renewal_sequence, trimmed_sum_trials, truncated_mean_scaling,
    LifetimeDistribution,
};
use birklab_core::rng::stream_seed;
use birklab_core::ScalingSequence;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

const MASTER_SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn presets() -> Vec<(&'static str, ConstructionData)> {
    ["odometer", "chacon", "heavy2q"]
        .into_iter()
        .map(|p| (p, ConstructionData::preset(p).unwrap()))
        .collect()
}

/// `B_m` by plain concatenation from the stage list, tracking the copy the
/// point sits in at each stage.
fn marked_word(data: &ConstructionData, choices: &[usize]) -> (Vec<bool>, usize) {
    let mut word = vec![true];
    let mut mark = 0usize;
    for (i, &k) in choices.iter().enumerate() {
        let stage = data.stage(i + 1).unwrap();
        let q = word.len() as u64;
        let mut next = Vec::new();
        for (j, s) in stage.spacers().iter().enumerate() {
            if j + 1 == k {
                mark += next.len();
            }
            next.extend_from_slice(&word);
            let s = match *s {
                SpacerCount::Fixed(s) => s,
                SpacerCount::HeightMultiple(m) => m * q,
            };
            next.extend(std::iter::repeat_n(false, s as usize));
        }
        word = next;
    }
    (word, mark)
}

fn criterion_1() -> Outcome {
    let limit = 100_000u64;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(MASTER_SEED);
    let presets = presets();
    let (mut cases, mut attempts) = (0, 0);
    let mut levels = std::collections::BTreeSet::new();
    while cases < 100 && attempts < 10_000 {
        attempts += 1;
        let (name, data) = &presets[cases % 3];
        let seed: u64 = rng.gen();
        let radius: u64 = rng.gen_range(0..=4000);
        let mut s = NameSampler::new(data.clone(), seed);
        let w = s.window_counts(radius).unwrap();
        let m = s.embed(radius).unwrap();
        if u64::try_from(s.height(m)).unwrap() > limit {
            continue;
        }
        let word: Vec<bool> = expand_word(data, m)
            .unwrap()
            .symbols()
            .iter()
            .map(|&x| x == Symbol::Base)
            .collect();
        let (marked, mark) = marked_word(data, &s.column_choices()[..m - 1]);
        let r = radius as usize;
        let left = word[mark - r..mark].iter().filter(|&&b| b).count() as u64;
        let right = word[mark + 1..=mark + r].iter().filter(|&&b| b).count() as u64;
        if word != marked || !word[mark] || (w.left, w.center, w.right) != (left, 1, right) {
            return outcome(
                false,
                format!(
                    "{name} seed {seed} radius {radius}: lazy {w:?}, brute ({left}, 1, {right})"
                ),
            );
        }
        levels.insert((*name, m));
        cases += 1;
    }
    outcome(
        cases == 100,
        format!(
            "{cases} cases exact, {} distinct (preset, level) pairs",
            levels.len()
        ),
    )
}

fn criterion_2() -> Outcome {
    for (name, data) in presets() {
        let stats = tower_stats(&data, 64).unwrap();
        for n in 1..64 {
            let stage = data.stage(n).unwrap();
            let q = &stats.heights[n - 1];
            let mut expect = q * stage.cuts();
            for s in stage.spacers() {
                expect += match *s {
                    SpacerCount::Fixed(v) => v.into(),
                    SpacerCount::HeightMultiple(m) => q * m,
                };
            }
            if stats.heights[n] != expect {
                return outcome(false, format!("{name}: q recursion fails at n = {n}"));
            }
        }
        let mut n = 1;
        while u64::try_from(&stats.heights[n - 1]).is_ok_and(|q| q <= DEFAULT_EXPANSION_BUDGET) {
            let word = expand_word(&data, n).unwrap();
            let c_prev: u64 = if n == 1 {
                1
            } else {
                u64::try_from(&stats.products[n - 2]).unwrap()
            };
            if word.len() as u64 != u64::try_from(&stats.heights[n - 1]).unwrap()
                || word.base_count() as u64 != c_prev
            {
                return outcome(
                    false,
                    format!("{name}: |B_n| or base count wrong at n = {n}"),
                );
            }
            n += 1;
        }
    }
    outcome(
        true,
        "q recursion through n = 64; |B_n| = q_n and base count C_{n-1} up to the expansion budget",
    )
}

fn heavy_ensemble() -> (Vec<BirkhoffSeries>, ScalingSequence) {
    let data = ConstructionData::heavy_spacer();
    let cps = dyadic_checkpoints(10, 24);
    let ensemble = (0..20u64)
        .into_par_iter()
        .map(|i| {
            series_from_name(
                &mut NameSampler::new(data.clone(), stream_seed(MASTER_SEED, i)),
                &cps,
            )
            .unwrap()
        })
        .collect();
    (ensemble, rank_one_scaling(&data))
}

fn criterion_3(ensemble: &[BirkhoffSeries], a: &ScalingSequence) -> Outcome {
    let j = 2.0;
    let (lo, hi) = (1.0 / (2.0 * j), 3.0 * j);
    let (mut min, mut max) = (f64::INFINITY, 0.0f64);
    for s in ensemble {
        s.check_invariants().unwrap();
        for (&n, &sigma) in s.checkpoints.iter().zip(&s.sigma) {
            let r = sigma as f64 / a.get(n).unwrap();
            min = min.min(r);
            max = max.max(r);
        }
    }
    outcome(
        min >= lo && max <= hi,
        format!("Sigma_n/a(n) in [{min:.4}, {max:.4}], required [{lo}, {hi}]"),
    )
}

fn criterion_4(ensemble: &[BirkhoffSeries], a: &ScalingSequence) -> Outcome {
    let stats = normalized_stats(ensemble, a, 1 << 12).unwrap();
    let osc: Vec<f64> = stats.oscillations().collect();
    let hits = osc.iter().filter(|&&o| o >= 0.25).count();
    let max = osc.iter().copied().fold(0.0, f64::max);
    outcome(
        hits >= 18,
        format!("{hits}/20 seeds with oscillation >= 0.25 (largest {max:.4}), required 18"),
    )
}

fn shipped() -> Vec<(&'static str, LifetimeDistribution)> {
    vec![
        ("delta:1", LifetimeDistribution::delta(1).unwrap()),
        (
            "geometric:0.5",
            LifetimeDistribution::geometric(0.5).unwrap(),
        ),
        ("power:0.5", LifetimeDistribution::power_tail(0.5).unwrap()),
        ("power:1", LifetimeDistribution::power_tail(1.0).unwrap()),
        ("harmonic", LifetimeDistribution::harmonic()),
        (
            "finite",
            LifetimeDistribution::finite(vec![(1, 0.2), (2, 0.3), (7, 0.5)]).unwrap(),
        ),
    ]
}

fn criterion_5() -> Outcome {
    let g = renewal_sequence(&LifetimeDistribution::geometric(0.5).unwrap(), 10_000);
    let dev = g.u()[1..]
        .iter()
        .map(|u| (u - 0.5).abs())
        .fold(0.0, f64::max);
    // A table longer than 2^14 is solved by blocked FFT convolution, so the
    // direct residual is an independent check there.
    let mut worst = (0.0f64, "none");
    for (name, f) in shipped() {
        for n_max in [10_000, 40_000] {
            let r = renewal_sequence(&f, n_max).convolution_residual(&f, 10_000);
            if r > worst.0 {
                worst = (r, name);
            }
        }
    }
    outcome(
        dev <= 1e-12 && worst.0 <= 1e-12,
        format!(
            "geometric max |u_n - 0.5| = {dev:e}; worst convolution residual {:e} ({})",
            worst.0, worst.1
        ),
    )
}

fn criterion_6() -> Outcome {
    let s = truncated_mean_scaling(&LifetimeDistribution::harmonic());
    let b10 = s.b(10.0).unwrap();
    let mut bad = None;
    for y in 2..=1000 {
        let y = y as f64;
        let b = s.b(y).unwrap();
        if !(s.a(b) >= y && s.a(b - 1) < y) {
            bad = Some(y);
            break;
        }
    }
    outcome(
        b10 == 44 && bad.is_none(),
        format!("b(10) = {b10}; inverse contract violations: {bad:?}"),
    )
}

fn criterion_7() -> Outcome {
    let q2 = queen_series(&LifetimeDistribution::geometric(0.5).unwrap(), 2).q(2);
    let err = (q2 - (1.0 + 1.0 / 9.0)).abs();
    let mut worst = 0.0f64;
    for (_, f) in shipped() {
        let q = queen_series(&f, 100_000);
        for (i, t) in q.terms.iter().enumerate() {
            let n = (i + 1) as f64;
            worst = worst.max(t * n * n);
        }
    }
    outcome(
        err <= 1e-12 && worst <= 1.0,
        format!("|Q(2) - 10/9| = {err:e}; max n^2 term_n = {worst}"),
    )
}

fn criterion_8() -> Outcome {
    let action = TranslationAction::new(GOLDEN_RATIO, 1.0, 0.3).unwrap();
    let c = translate_counts(&action, 1_000_000);
    let err = (c.ratio - 1.0 / GOLDEN_RATIO).abs();
    // Exact scan of the 401 x 401 box; counts for smaller N by rings.
    let big = 200i64;
    let a = BigRational::from_float(GOLDEN_RATIO).unwrap();
    let x = BigRational::from_float(0.3).unwrap();
    let zero = BigRational::from_integer(BigInt::from(0));
    let one = BigRational::from_integer(BigInt::from(1));
    let mut ring = vec![0u64; big as usize + 1];
    for k in -big..=big {
        let base = &x + &a * BigRational::from_integer(k.into());
        for l in -big..=big {
            let y = &base + BigRational::from_integer(l.into());
            if y >= zero && y < one {
                ring[k.abs().max(l.abs()) as usize] += 1;
            }
        }
    }
    let mut acc = 0;
    let mut mismatch = None;
    for n in 0..=big as usize {
        acc += ring[n];
        let fast = translate_counts(&action, n as u64).count;
        if fast != acc {
            mismatch = Some((n, fast, acc));
            break;
        }
    }
    outcome(
        err <= 0.01 && mismatch.is_none(),
        format!("|ratio - 1/phi| = {err:.2e} at N = 10^6; brute-force mismatches for N <= 200: {mismatch:?}"),
    )
}

fn criterion_9() -> Outcome {
    let f = LifetimeDistribution::geometric(0.5).unwrap();
    let n = 1_000_000u64;
    let renewal = renewal_sequence(&f, n as usize);
    let rows: Vec<(u64, f64, bool)> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let w = walk_sample(&f, stream_seed(MASTER_SEED, i), n as usize).unwrap();
            let c = walk_counts(&w, n, &renewal).unwrap();
            let identity = [1, 10, 1000, n].iter().all(|&m| {
                let k = w.count_within(m).unwrap();
                k == w.direct_visit_count(m).unwrap()
                    && series_from_walk(&w, &[m]).unwrap().sigma[0] == k
            });
            (c.count, c.ratio_to_renewal, identity)
        })
        .collect();
    let density = rows.iter().map(|r| r.0 as f64).sum::<f64>() / 50.0 / (2 * n + 1) as f64;
    let ratio = rows.iter().map(|r| r.1).sum::<f64>() / 50.0;
    let identity = rows.iter().all(|r| r.2);
    outcome(
        identity && (density - 0.5).abs() <= 0.025 && (1.8..=2.2).contains(&ratio),
        format!("identity exact: {identity}; mean count/(2N+1) = {density:.5}; mean ratio_to_renewal = {ratio:.5}"),
    )
}

fn criterion_10() -> Outcome {
    let r =
        trimmed_sum_trials(&LifetimeDistribution::harmonic(), 100_000, 200, MASTER_SEED).unwrap();
    let m = r.summary.mean;
    outcome(
        (m - 1.0).abs() <= 0.15,
        format!(
            "b(n) = {}, trial mean {m:.4} (sd {:.4})",
            r.b_n, r.summary.std_dev
        ),
    )
}

fn criterion_11() -> Outcome {
    let opts = ErOptions::new(vec![2, 4, 8], 1 << 10, 1 << 20);
    let geometric = ScalingSequence::renewal(&renewal_sequence(
        &LifetimeDistribution::geometric(0.5).unwrap(),
        1 << 20,
    ));
    let g = er_diagnostic(&geometric, &opts).unwrap();
    let h = er_diagnostic(
        &ScalingSequence::closed_form(ClosedForm::OverHarmonic),
        &opts,
    )
    .unwrap();
    let per_p: Vec<String> = [2, 4, 8]
        .iter()
        .map(|&p| format!("p={p}: {:.4}", h.m_hat_for(p)))
        .collect();
    let closed = harmonic(1 << 13) / harmonic(1 << 10);
    outcome(
        g.m_hat <= 1.2 && h.m_hat <= 1.2,
        format!(
            "a_u geometric M_hat = {:.6}; n/H_n M_hat = {:.4} ({}; H_8192/H_1024 = {closed:.4})",
            g.m_hat,
            h.m_hat,
            per_p.join(", ")
        ),
    )
}

fn criterion_12() -> Outcome {
    let with = |experiment, trials| ExperimentConfig {
        seed: MASTER_SEED,
        trials,
        ..ExperimentConfig::new(experiment)
    };
    let configs = [
        with(
            Experiment::RankOne {
                construction: ConstructionSpec::Preset("chacon".into()),
                checkpoints: Checkpoints::Text("dyadic:0:20".into()),
                burn_in: None,
            },
            16,
        ),
        with(
            Experiment::Trimmed {
                dist: DistSpec::Text("harmonic".into()),
                n: 10_000,
            },
            32,
        ),
        with(
            Experiment::Walk {
                dist: DistSpec::Text("power:0.8".into()),
                n: vec![100, 10_000],
                j: None,
            },
            16,
        ),
    ];
    let root = tempfile::tempdir().unwrap();
    let mut compared = 0;
    for (i, c) in configs.iter().enumerate() {
        let mut files: Vec<Vec<(String, Vec<u8>)>> = Vec::new();
        for (run_no, threads) in [1usize, 8, 3].into_iter().enumerate() {
            let dir = root.path().join(format!("{i}-{run_no}"));
            let cfg = ExperimentConfig {
                out: Some(dir.clone()),
                ..c.clone()
            };
            let report = run(
                &cfg,
                &RunOptions {
                    threads: Some(threads),
                    ..Default::default()
                },
            )
            .unwrap();
            files.push(
                report
                    .files
                    .iter()
                    .map(|p| {
                        (
                            p.file_name().unwrap().to_string_lossy().into_owned(),
                            std::fs::read(Path::new(p)).unwrap(),
                        )
                    })
                    .collect(),
            );
        }
        if files.iter().any(|f| *f != files[0]) {
            return outcome(
                false,
                format!("{} outputs differ across runs", c.experiment.kind()),
            );
        }
        compared += files[0].len();
    }
    outcome(
        true,
        format!("{compared} output files byte-identical across 3 runs with 1, 8 and 3 threads"),
    )
}

fn main() {
    let start = Instant::now();
    let mut results: Vec<(usize, &str, Outcome, f64)> = Vec::new();
    let mut timed = |id: usize, name: &'static str, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        results.push((id, name, o, t.elapsed().as_secs_f64()));
    };
    timed(1, "word-combinatorics oracle equivalence", &criterion_1);
    timed(2, "structural identities", &criterion_2);
    let t = Instant::now();
    let (ensemble, a) = heavy_ensemble();
    let ensemble_time = t.elapsed().as_secs_f64();
    timed(3, "bounded symmetric ratios, heavy2q", &|| {
        criterion_3(&ensemble, &a)
    });
    timed(4, "non-settling symmetric ratios, heavy2q", &|| {
        criterion_4(&ensemble, &a)
    });
    timed(5, "renewal exactness", &criterion_5);
    timed(6, "scaling inverse contract", &criterion_6);
    timed(7, "queen-series values", &criterion_7);
    timed(8, "translation action limit", &criterion_8);
    timed(9, "random-walk counts and identity", &criterion_9);
    timed(10, "trimmed sums", &criterion_10);
    timed(11, "extended regular variation band", &criterion_11);
    timed(12, "reproducibility", &criterion_12);

    let mut failed = 0;
    for (id, name, o, secs) in &results {
        let secs = if *id == 3 || *id == 4 {
            secs + ensemble_time
        } else {
            *secs
        };
        let tag = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {tag}: {name} | {} | {secs:.1}s",
            o.detail
        );
    }
    println!(
        "acceptance: {}/{} passed in {:.1}s",
        results.len() - failed,
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
