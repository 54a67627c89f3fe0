use birklab::config::{Experiment, ExperimentConfig};
use birklab::formats::{Checkpoints, ConstructionSpec, DistSpec, Real, ScalingSpec};
use birklab::{compute, run, RunOptions};

fn configs() -> Vec<ExperimentConfig> {
    let with = |experiment, trials| ExperimentConfig {
        seed: 11,
        trials,
        ..ExperimentConfig::new(experiment)
    };
    vec![
        with(
            Experiment::RankOne {
                construction: ConstructionSpec::Preset("heavy2q".into()),
                checkpoints: Checkpoints::Text("dyadic:4:16".into()),
                burn_in: None,
            },
            12,
        ),
        with(
            Experiment::Trimmed {
                dist: DistSpec::Text("harmonic".into()),
                n: 2000,
            },
            16,
        ),
        with(
            Experiment::Walk {
                dist: DistSpec::Text("power:0.7".into()),
                n: vec![10, 500],
                j: None,
            },
            9,
        ),
        with(
            Experiment::Renewal {
                dist: DistSpec::Text("power:0.6".into()),
                n: 20_000,
            },
            1,
        ),
        with(
            Experiment::Translate {
                alpha: Real::Sqrt2,
                beta: Real::Value(-0.3),
                x: 0.1,
                n: vec![0, 10, 1000],
                allow_rational: false,
            },
            1,
        ),
        with(
            Experiment::Regvar {
                scaling: ScalingSpec("truncated-mean:power:0.5".into()),
                p_values: vec![2, 3],
                n_lo: 8,
                n_hi: 1 << 16,
                grid: 2,
            },
            1,
        ),
        with(
            Experiment::DyadicTail {
                dist: DistSpec::Text("geometric:0.5".into()),
                t: 1.0,
                n_max: 12,
            },
            1,
        ),
    ]
}

#[test]
fn thread_count_never_changes_rows() {
    for c in configs() {
        let one = compute(&c, Some(1)).unwrap();
        let many = compute(&c, Some(7)).unwrap();
        assert_eq!(one.len(), many.len());
        for (a, b) in one.iter().zip(&many) {
            assert_eq!(a.data_csv(), b.data_csv(), "{}", c.experiment.kind());
        }
    }
}

#[test]
fn rerun_is_byte_identical() {
    for c in configs() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let ca = ExperimentConfig {
            out: Some(a.path().into()),
            ..c.clone()
        };
        let cb = ExperimentConfig {
            out: Some(b.path().into()),
            ..c.clone()
        };
        let ra = run(
            &ca,
            &RunOptions {
                threads: Some(2),
                ..Default::default()
            },
        )
        .unwrap();
        let rb = run(
            &cb,
            &RunOptions {
                threads: Some(5),
                json: true,
                stamp: false,
            },
        )
        .unwrap();
        for f in &ra.files {
            let name = f.file_name().unwrap();
            assert_eq!(
                std::fs::read(f).unwrap(),
                std::fs::read(b.path().join(name)).unwrap()
            );
        }
        assert!(rb.files.len() == 2 * ra.files.len());
    }
}

#[test]
fn seeds_change_rows() {
    let c = configs().remove(1);
    let other = ExperimentConfig {
        seed: 12,
        ..c.clone()
    };
    assert_ne!(
        compute(&c, None).unwrap()[0].data_csv(),
        compute(&other, None).unwrap()[0].data_csv()
    );
}
