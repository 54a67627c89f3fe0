//! One function per experiment kind, each returning output tables.

use birklab_core::birkhoff::{
    normalized_stats, series_from_name, series_from_walk, BirkhoffSeries,
};
use birklab_core::lattice::{
    translate_counts, walk_counts, walk_sample, Arithmetic, TranslationAction,
};
use birklab_core::rankone::{rank_one_scaling, NameSampler};
use birklab_core::regvar::{er_diagnostic, sv_diagnostic, ErOptions};
use birklab_core::renewal::{
    assemble_trials, dyadic_tail_series, queen_series, renewal_sequence, trimmed_sum_scale,
    trimmed_sum_trial, truncated_mean_scaling, DEFAULT_INVERSE_HORIZON,
};
use birklab_core::rng::stream_seed;
use birklab_core::ScalingSequence;
use rayon::prelude::*;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::{RunError, RunResult};
use crate::output::{Cell, Table};

/// Burn-in used when a rank-one config gives none, capped by the horizon.
pub const DEFAULT_BURN_IN: u64 = 1 << 12;

/// Renewal identities are re-checked by direct summation up to this index.
const RESIDUAL_CHECK: usize = 4096;

fn invariant(msg: String) -> RunError {
    RunError::Invariant(msg)
}

/// Runs `job(i)` for `i < trials` and returns the results in index order.
fn per_trial<T, F>(pool: &rayon::ThreadPool, trials: u64, job: F) -> RunResult<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> RunResult<T> + Sync,
{
    pool.install(|| (0..trials).into_par_iter().map(&job).collect())
}

pub fn execute(config: &ExperimentConfig, pool: &rayon::ThreadPool) -> RunResult<Vec<Table>> {
    config.validate()?;
    let seed = config.seed;
    let trials = config.trials;
    match &config.experiment {
        Experiment::RankOne {
            construction,
            checkpoints,
            burn_in,
        } => {
            let data = construction.build()?;
            let checkpoints = checkpoints.expand()?;
            let horizon = *checkpoints.last().expect("nonempty");
            let burn_in = burn_in.unwrap_or(DEFAULT_BURN_IN.min(horizon));
            let ensemble = per_trial(pool, trials, |i| {
                let mut sampler = NameSampler::new(data.clone(), stream_seed(seed, i));
                let series = series_from_name(&mut sampler, &checkpoints)?;
                series.check_invariants()?;
                Ok(series)
            })?;
            rank_one_tables(&ensemble, &rank_one_scaling(&data), burn_in)
        }
        Experiment::Renewal { dist, n } => {
            let f = dist.build()?;
            let n = to_usize(*n)?;
            let seq = renewal_sequence(&f, n);
            let residual = seq.convolution_residual(&f, n.min(RESIDUAL_CHECK));
            if residual > 1e-12 {
                return Err(invariant(format!("renewal identity residual {residual:e}")));
            }
            let mut t = Table::new("renewal", &["n", "u", "a_u"]);
            for (i, (&u, &a)) in seq.u().iter().zip(seq.prefix_sums()).enumerate() {
                t.push(vec![i.into(), u.into(), a.into()]);
            }
            t.note("convolution_residual", residual);
            Ok(vec![t])
        }
        Experiment::Queen { dist, n } => {
            let f = dist.build()?;
            let q = queen_series(&f, to_usize(*n)?);
            let mut t = Table::new("queen", &["n", "tail", "truncated_mean", "term", "partial"]);
            for i in 0..q.terms.len() {
                let n = (i + 1) as f64;
                if q.terms[i] * n * n > 1.0 + 1e-12 {
                    return Err(invariant(format!(
                        "queen term {} exceeds 1/n^2 at n = {n}",
                        q.terms[i]
                    )));
                }
                t.push(vec![
                    (i + 1).into(),
                    q.tails[i].into(),
                    q.truncated_means[i].into(),
                    q.terms[i].into(),
                    q.partial[i].into(),
                ]);
            }
            t.note(
                "decay_slope",
                q.decay_slope.map_or("none".to_string(), |s| s.to_string()),
            );
            Ok(vec![t])
        }
        Experiment::DyadicTail { dist, t, n_max } => {
            let f = dist.build()?;
            let scaling = ScalingSequence::truncated_mean(truncated_mean_scaling(&f));
            let series = dyadic_tail_series(&f, &scaling, *t, *n_max, DEFAULT_INVERSE_HORIZON)?;
            let mut table = Table::new(
                "dyadic_tail",
                &["n", "b", "index", "tail", "term", "partial"],
            );
            for r in &series.rows {
                table.push(vec![
                    r.n.into(),
                    r.b.into(),
                    r.index.into(),
                    r.tail.into(),
                    r.term.into(),
                    r.partial.into(),
                ]);
            }
            table.note("t", t);
            Ok(vec![table])
        }
        Experiment::Trimmed { dist, n } => {
            let f = dist.build()?;
            let b_n = trimmed_sum_scale(&f, *n, trials)?;
            let results = per_trial(pool, trials, |i| {
                Ok(trimmed_sum_trial(&f, *n, b_n, seed, i)?)
            })?;
            let res = assemble_trials(*n, b_n, results);
            let mut per = Table::new("trimmed_trials", &["trial", "seed", "ratio"]);
            for tr in &res.trials {
                per.push(vec![tr.trial.into(), tr.seed.into(), tr.ratio.into()]);
            }
            let s = &res.summary;
            let mut sum = Table::new(
                "trimmed_summary",
                &[
                    "n", "b_n", "count", "mean", "std_dev", "min", "q05", "q25", "median", "q75",
                    "q95", "max",
                ],
            );
            sum.push(vec![
                res.n.into(),
                res.b_n.into(),
                s.count.into(),
                s.mean.into(),
                s.std_dev.into(),
                s.min.into(),
                s.q05.into(),
                s.q25.into(),
                s.median.into(),
                s.q75.into(),
                s.q95.into(),
                s.max.into(),
            ]);
            Ok(vec![per, sum])
        }
        Experiment::Translate {
            alpha,
            beta,
            x,
            n,
            allow_rational,
        } => {
            let action = if *allow_rational {
                TranslationAction::new_commensurable(alpha.value(), beta.value(), *x)?
            } else {
                TranslationAction::new(alpha.value(), beta.value(), *x)?
            };
            let mut t = Table::new("translate", &["N", "count", "ratio", "arithmetic"]);
            for &big_n in n {
                let c = translate_counts(&action, big_n);
                let width = 2 * big_n as u128 + 1;
                let bound = if action.beta.abs() >= 1.0 {
                    width
                } else {
                    width * width
                };
                if c.count as u128 > bound {
                    return Err(invariant(format!(
                        "count {} exceeds {bound} at N = {big_n}",
                        c.count
                    )));
                }
                let arith = match c.arithmetic {
                    Arithmetic::Fixed128 => "fixed128",
                    Arithmetic::BigInt => "bigint",
                };
                t.push(vec![
                    big_n.into(),
                    c.count.into(),
                    c.ratio.into(),
                    arith.into(),
                ]);
            }
            let (na, nb) = action.normalized();
            t.note("alpha", alpha);
            t.note("beta", beta);
            t.note("x", x);
            t.note("normalized", format!("({na}, {nb})"));
            t.note("r", action.ratio_constant());
            Ok(vec![t])
        }
        Experiment::Walk { dist, n, j } => {
            let f = dist.build()?;
            let mut ns = n.clone();
            ns.sort_unstable();
            ns.dedup();
            let n_max = *ns.last().expect("nonempty");
            let j = j.unwrap_or(to_usize(n_max)?);
            let renewal = renewal_sequence(&f, to_usize(n_max)?);
            let rows = per_trial(pool, trials, |i| {
                let s = stream_seed(seed, i);
                let walk = walk_sample(&f, s, j)?;
                let series = series_from_walk(&walk, &ns)?;
                series.check_invariants()?;
                let mut out = Vec::with_capacity(ns.len());
                for (k, &big_n) in ns.iter().enumerate() {
                    let c = walk_counts(&walk, big_n, &renewal)?;
                    let direct = walk.direct_visit_count(big_n)?;
                    if direct != c.count || series.sigma[k] != c.count {
                        return Err(invariant(format!(
                            "trial {i}, N = {big_n}: interarrival count {}, direct count {direct}, series {}",
                            c.count, series.sigma[k]
                        )));
                    }
                    out.push((i, s, c));
                }
                Ok(out)
            })?;
            let mut per = Table::new("walk", &["trial", "seed", "N", "count", "a_u", "ratio"]);
            for &(i, s, c) in rows.iter().flatten() {
                per.push(vec![
                    i.into(),
                    s.into(),
                    c.n.into(),
                    c.count.into(),
                    c.a_u.into(),
                    c.ratio_to_renewal.into(),
                ]);
            }
            let mut sum = Table::new(
                "walk_summary",
                &["N", "trials", "mean_count", "mean_density", "mean_ratio"],
            );
            for (k, &big_n) in ns.iter().enumerate() {
                let counts: Vec<f64> = rows.iter().map(|r| r[k].2.count as f64).collect();
                let ratios: Vec<f64> = rows.iter().map(|r| r[k].2.ratio_to_renewal).collect();
                let mean_count = mean(&counts);
                sum.push(vec![
                    big_n.into(),
                    trials.into(),
                    mean_count.into(),
                    (mean_count / (2 * big_n + 1) as f64).into(),
                    mean(&ratios).into(),
                ]);
            }
            per.note("j", j);
            Ok(vec![per, sum])
        }
        Experiment::Regvar {
            scaling,
            p_values,
            n_lo,
            n_hi,
            grid,
        } => {
            let built = scaling.build(*n_hi)?;
            let opts = ErOptions {
                grid: *grid,
                ..ErOptions::new(p_values.clone(), *n_lo, *n_hi)
            };
            let rep = er_diagnostic(&built.sequence, &opts)?;
            if rep.m_hat < 1.0
                || rep
                    .rows
                    .iter()
                    .any(|r| !(r.ratio > 0.0 && r.ratio.is_finite()))
            {
                return Err(invariant("ratio table has a nonpositive entry".into()));
            }
            let mut er = Table::new("regvar_er", &["p", "n", "a_n", "a_pn", "ratio"]);
            for r in &rep.rows {
                er.push(vec![
                    r.p.into(),
                    r.n.into(),
                    r.a_n.into(),
                    r.a_pn.into(),
                    r.ratio.into(),
                ]);
            }
            er.note("scaling", &scaling.0);
            let mut sum = Table::new("regvar_summary", &["p", "m_hat", "settle_n"]);
            for &(p, settle) in &rep.settle {
                let settle = settle.map_or(Cell::S(String::new()), Cell::U);
                sum.push(vec![p.into(), rep.m_hat_for(p).into(), settle]);
            }
            sum.note("m_hat", rep.m_hat);
            sum.note("band", rep.band);
            let mut tables = vec![er, sum];
            if let Some(f) = built.truncated_mean {
                if n_hi / 2 >= *n_lo {
                    let sv = sv_diagnostic(|n| f.truncated_mean(n), *n_lo, *n_hi, *grid)?;
                    let mut t = Table::new("regvar_sv", &["n", "l_n", "l_2n", "ratio"]);
                    for r in &sv.rows {
                        t.push(vec![
                            r.n.into(),
                            r.l_n.into(),
                            r.l_2n.into(),
                            r.ratio.into(),
                        ]);
                    }
                    t.note("max_deviation", sv.max_deviation);
                    t.note("final_deviation", sv.final_deviation);
                    tables.push(t);
                }
            }
            Ok(tables)
        }
    }
}

fn rank_one_tables(
    ensemble: &[BirkhoffSeries],
    a: &ScalingSequence,
    burn_in: u64,
) -> RunResult<Vec<Table>> {
    let stats = normalized_stats(ensemble, a, burn_in)?;
    let mut series = Table::new(
        "rank_one_series",
        &[
            "trial",
            "seed",
            "n",
            "s_plus",
            "s_minus",
            "sigma",
            "a_n",
            "ratio_sym",
            "ratio_plus",
        ],
    );
    for (i, (s, st)) in ensemble.iter().zip(&stats.per_series).enumerate() {
        for k in 0..s.len() {
            series.push(vec![
                i.into(),
                s.seed.into(),
                s.checkpoints[k].into(),
                s.s_plus[k].into(),
                s.s_minus[k].into(),
                s.sigma[k].into(),
                st.a_n[k].into(),
                st.ratio_sym[k].into(),
                st.ratio_plus[k].into(),
            ]);
        }
    }
    series.note(
        "center",
        "time 0 is an occurrence, counted once in sigma and in both one-sided sums",
    );
    let mut summary = Table::new(
        "rank_one_summary",
        &[
            "seed",
            "alpha_hat",
            "beta_hat",
            "beta_lower_hat",
            "oscillation",
        ],
    );
    for st in &stats.per_series {
        summary.push(vec![
            st.seed.into(),
            st.sup_plus.into(),
            st.running_sup.into(),
            st.running_inf.into(),
            st.oscillation.into(),
        ]);
    }
    summary.note(
        "estimators",
        "finite-horizon running extrema past burn-in, not limits",
    );
    summary.note("burn_in", stats.burn_in);
    summary.note("horizon", stats.horizon);
    summary.note("ensemble_alpha_hat", stats.alpha_hat);
    summary.note("ensemble_beta_hat", stats.beta_hat);
    summary.note("ensemble_beta_lower_hat", stats.beta_lower_hat);
    summary.note("flagged", stats.flagged);
    if stats.flagged {
        log_warning(&format!(
            "beta_lower_hat {} exceeds alpha_hat / 2 + 0.1 = {}; review the horizon",
            stats.beta_lower_hat,
            stats.alpha_hat / 2.0 + 0.1
        ));
    }
    Ok(vec![series, summary])
}

fn log_warning(msg: &str) {
    eprintln!("warning: {msg}");
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn to_usize(n: u64) -> RunResult<usize> {
    usize::try_from(n).map_err(|_| RunError::Config(format!("{n} does not fit in memory indices")))
}
