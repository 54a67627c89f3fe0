use std::path::PathBuf;
use std::process::ExitCode;

use birklab::config::{Experiment, ExperimentConfig};
use birklab::formats::{Checkpoints, ConstructionSpec, DistSpec, Real, ScalingSpec};
use birklab::{run, RunError, RunOptions, RunResult};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "birklab",
    version,
    about = "Two-sided Birkhoff sum experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Same as calling the experiment subcommand directly.
    #[command(subcommand)]
    Run(Kind),
    #[command(flatten)]
    Direct(Kind),
}

#[derive(Args, Clone)]
struct Common {
    /// Experiment config (JSON); inline subject flags are then ignored.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of trials.
    #[arg(long, visible_alias = "seeds")]
    trials: Option<u64>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    threads: Option<usize>,
    /// Also write JSON copies of every table.
    #[arg(long)]
    json: bool,
    /// Add a timestamp to output headers.
    #[arg(long)]
    stamp: bool,
}

#[derive(Subcommand)]
enum Kind {
    /// Occupation counts along random rank-one orbits.
    RankOne {
        #[command(flatten)]
        common: Common,
        /// odometer, chacon or heavy2q.
        #[arg(long, conflicts_with = "construction")]
        preset: Option<String>,
        /// Construction data file.
        #[arg(long)]
        construction: Option<PathBuf>,
        /// dyadic:LO:HI or a comma-separated list.
        #[arg(long, default_value = "dyadic:10:24", conflicts_with = "radius")]
        checkpoints: String,
        /// Single checkpoint.
        #[arg(long)]
        radius: Option<u64>,
        #[arg(long)]
        burn_in: Option<u64>,
    },
    /// Renewal sequence and its partial sums.
    Renewal {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dist: Option<String>,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Small-tail series terms and partial sums.
    Queen {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dist: Option<String>,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Dyadic tail series.
    DyadicTail {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dist: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 30)]
        n_max: u32,
    },
    /// Trimmed-sum ratios.
    Trimmed {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dist: Option<String>,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Lattice counts of the translation action.
    Translate {
        #[command(flatten)]
        common: Common,
        /// A number, golden or sqrt2.
        #[arg(long)]
        alpha: Option<Real>,
        #[arg(long, default_value = "1")]
        beta: Real,
        #[arg(long, default_value_t = 0.0)]
        x: f64,
        /// Box half-widths, comma separated.
        #[arg(long = "N", value_delimiter = ',')]
        big_n: Vec<u64>,
        /// Skip the check that alpha/beta is not a small-denominator fraction.
        #[arg(long)]
        allow_rational: bool,
    },
    /// Random-walk orbit counts.
    Walk {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dist: Option<String>,
        #[arg(long = "N", value_delimiter = ',')]
        big_n: Vec<u64>,
        /// Steps per side.
        #[arg(long)]
        j: Option<usize>,
    },
    /// Band and slow-variation diagnostics of a scaling sequence.
    Regvar {
        #[command(flatten)]
        common: Common,
        /// identity, sqrt_ceil, n_over_harmonic, renewal:DIST, truncated-mean:DIST, rank-one:PRESET.
        #[arg(long)]
        scaling: Option<String>,
        #[arg(long = "p", value_delimiter = ',', default_value = "2,4,8")]
        p_values: Vec<u64>,
        #[arg(long, default_value_t = 1 << 10)]
        n_lo: u64,
        #[arg(long, default_value_t = 1 << 20)]
        n_hi: u64,
        #[arg(long, default_value_t = 2)]
        grid: u64,
    },
}

fn need<T>(v: Option<T>, flag: &str) -> RunResult<T> {
    v.ok_or_else(|| RunError::Config(format!("--{flag} is required without --config")))
}

fn dist(v: Option<String>) -> RunResult<DistSpec> {
    Ok(DistSpec::Text(need(v, "dist")?))
}

fn nonempty(v: Vec<u64>) -> RunResult<Vec<u64>> {
    if v.is_empty() {
        Err(RunError::Config("--N is required without --config".into()))
    } else {
        Ok(v)
    }
}

fn build(kind: Kind) -> RunResult<(ExperimentConfig, Common)> {
    let (common, inline) = match kind {
        Kind::RankOne {
            common,
            preset,
            construction,
            checkpoints,
            radius,
            burn_in,
        } => {
            let construction = match (preset, construction) {
                (_, Some(path)) => ConstructionSpec::load(&path).map(Some),
                (Some(p), None) => Ok(Some(ConstructionSpec::Preset(p))),
                (None, None) => Ok(None),
            };
            let checkpoints = match radius {
                Some(r) => Checkpoints::List(vec![r]),
                None => Checkpoints::Text(checkpoints),
            };
            let inline = move || -> RunResult<Experiment> {
                Ok(Experiment::RankOne {
                    construction: need(construction?, "preset")?,
                    checkpoints,
                    burn_in,
                })
            };
            (
                common,
                Box::new(inline) as Box<dyn FnOnce() -> RunResult<Experiment>>,
            )
        }
        Kind::Renewal { common, dist: d, n } => (
            common,
            Box::new(move || {
                Ok(Experiment::Renewal {
                    dist: dist(d)?,
                    n: need(n, "n")?,
                })
            }) as Box<_>,
        ),
        Kind::Queen { common, dist: d, n } => (
            common,
            Box::new(move || {
                Ok(Experiment::Queen {
                    dist: dist(d)?,
                    n: need(n, "n")?,
                })
            }) as Box<_>,
        ),
        Kind::DyadicTail {
            common,
            dist: d,
            t,
            n_max,
        } => (
            common,
            Box::new(move || {
                Ok(Experiment::DyadicTail {
                    dist: dist(d)?,
                    t,
                    n_max,
                })
            }) as Box<_>,
        ),
        Kind::Trimmed { common, dist: d, n } => (
            common,
            Box::new(move || {
                Ok(Experiment::Trimmed {
                    dist: dist(d)?,
                    n: need(n, "n")?,
                })
            }) as Box<_>,
        ),
        Kind::Translate {
            common,
            alpha,
            beta,
            x,
            big_n,
            allow_rational,
        } => (
            common,
            Box::new(move || {
                Ok(Experiment::Translate {
                    alpha: need(alpha, "alpha")?,
                    beta,
                    x,
                    n: nonempty(big_n)?,
                    allow_rational,
                })
            }) as Box<_>,
        ),
        Kind::Walk {
            common,
            dist: d,
            big_n,
            j,
        } => (
            common,
            Box::new(move || {
                Ok(Experiment::Walk {
                    dist: dist(d)?,
                    n: nonempty(big_n)?,
                    j,
                })
            }) as Box<_>,
        ),
        Kind::Regvar {
            common,
            scaling,
            p_values,
            n_lo,
            n_hi,
            grid,
        } => (
            common,
            Box::new(move || {
                Ok(Experiment::Regvar {
                    scaling: ScalingSpec(need(scaling, "scaling")?),
                    p_values,
                    n_lo,
                    n_hi,
                    grid,
                })
            }) as Box<_>,
        ),
    };
    let mut config = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::new(inline()?).resolve(std::path::Path::new("."))?,
    };
    if let Some(s) = common.seed {
        config.seed = s;
    }
    if let Some(t) = common.trials {
        config.trials = t;
    }
    if let Some(o) = &common.out {
        config.out = Some(o.clone());
    }
    Ok((config, common))
}

fn main_inner(kind: Kind) -> RunResult<()> {
    let name = kind_name(&kind);
    let (config, common) = build(kind)?;
    if config.experiment.kind() != name {
        return Err(RunError::Config(format!(
            "config describes a {} experiment, not {name}",
            config.experiment.kind()
        )));
    }
    let opts = RunOptions {
        threads: common.threads,
        json: common.json,
        stamp: common.stamp,
    };
    let report = run(&config, &opts)?;
    for f in &report.files {
        println!("{}", f.display());
    }
    Ok(())
}

fn kind_name(kind: &Kind) -> &'static str {
    match kind {
        Kind::RankOne { .. } => "rank-one",
        Kind::Renewal { .. } => "renewal",
        Kind::Queen { .. } => "queen",
        Kind::DyadicTail { .. } => "dyadic-tail",
        Kind::Trimmed { .. } => "trimmed",
        Kind::Translate { .. } => "translate",
        Kind::Walk { .. } => "walk",
        Kind::Regvar { .. } => "regvar",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let kind = match cli.command {
        Command::Run(k) | Command::Direct(k) => k,
    };
    match main_inner(kind) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
