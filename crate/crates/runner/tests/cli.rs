use std::path::{Path, PathBuf};
use std::process::Command;

use birklab::output::data_lines;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_birklab"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run_ok(args: &[&str], out: &Path) -> String {
    let o = bin().args(args).arg("--out").arg(out).output().unwrap();
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    data_lines(&text)
        .iter()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn chacon_radius_13() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(
        &[
            "run", "rank-one", "--preset", "chacon", "--radius", "13", "--seeds", "1",
        ],
        dir.path(),
    );
    let r = rows(&dir.path().join("rank_one_series.csv"));
    assert_eq!(r.len(), 1);
    let sigma: u64 = r[0][5].parse().unwrap();
    assert!((9..=27).contains(&sigma));
}

#[test]
fn geometric_renewal_column() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(
        &["run", "renewal", "--dist", "geometric:0.5", "--n", "10"],
        dir.path(),
    );
    let r = rows(&dir.path().join("renewal.csv"));
    assert_eq!(r.len(), 11);
    assert!(r[1..].iter().all(|row| row[1] == "0.5"));
}

#[test]
fn golden_translate_zero_box() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(
        &[
            "run",
            "translate",
            "--alpha",
            "golden",
            "--x",
            "0.3",
            "--N",
            "0",
        ],
        dir.path(),
    );
    assert_eq!(rows(&dir.path().join("translate.csv"))[0][1], "1");
}

#[test]
fn direct_and_run_forms_agree() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_ok(&["queen", "--dist", "harmonic", "--n", "200"], a.path());
    run_ok(
        &["run", "queen", "--dist", "harmonic", "--n", "200"],
        b.path(),
    );
    assert_eq!(
        std::fs::read(a.path().join("queen.csv")).unwrap(),
        std::fs::read(b.path().join("queen.csv")).unwrap()
    );
}

#[test]
fn headers_carry_provenance() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(
        &[
            "walk",
            "--dist",
            "geometric:0.5",
            "--N",
            "100",
            "--seed",
            "42",
            "--trials",
            "3",
            "--json",
        ],
        dir.path(),
    );
    let text = std::fs::read_to_string(dir.path().join("walk.csv")).unwrap();
    let header: Vec<&str> = text.lines().take_while(|l| l.starts_with('#')).collect();
    assert!(header[0].starts_with("# tool: birklab "));
    assert!(header
        .iter()
        .any(|l| l.starts_with("# config_sha256: ") && l.len() == "# config_sha256: ".len() + 64));
    assert!(header.contains(&"# seed: 42"));
    assert!(header
        .iter()
        .any(|l| l.starts_with("# generator: ChaCha8Rng")));
    assert!(!header.iter().any(|l| l.starts_with("# stamp")));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("walk.json")).unwrap())
            .unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 3);
    assert_eq!(json["columns"][0], "trial");
}

#[test]
fn stamp_changes_headers_only() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_ok(
        &[
            "trimmed",
            "--dist",
            "power:0.5",
            "--n",
            "1000",
            "--trials",
            "8",
        ],
        a.path(),
    );
    run_ok(
        &[
            "trimmed",
            "--dist",
            "power:0.5",
            "--n",
            "1000",
            "--trials",
            "8",
            "--stamp",
        ],
        b.path(),
    );
    let ta = std::fs::read_to_string(a.path().join("trimmed_trials.csv")).unwrap();
    let tb = std::fs::read_to_string(b.path().join("trimmed_trials.csv")).unwrap();
    assert!(tb.contains("# stamp: "));
    assert_eq!(data_lines(&ta), data_lines(&tb));
}

#[test]
fn config_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture("configs/renewal_three_point.json");
    run_ok(&["renewal", "--config", cfg.to_str().unwrap()], dir.path());
    let r = rows(&dir.path().join("renewal.csv"));
    let last: f64 = r.last().unwrap()[1].parse().unwrap();
    assert!((last - 1.0 / 4.3).abs() < 1e-9);
    let regvar = fixture("configs/regvar_harmonic.json");
    run_ok(
        &["regvar", "--config", regvar.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(rows(&dir.path().join("regvar_summary.csv")).len(), 3);
}

#[test]
fn construction_fixtures_match_presets() {
    for name in ["odometer", "chacon", "heavy2q"] {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let path = fixture(&format!("{name}.json"));
        run_ok(
            &[
                "rank-one",
                "--construction",
                path.to_str().unwrap(),
                "--checkpoints",
                "dyadic:0:12",
                "--trials",
                "3",
            ],
            a.path(),
        );
        run_ok(
            &[
                "rank-one",
                "--preset",
                name,
                "--checkpoints",
                "dyadic:0:12",
                "--trials",
                "3",
            ],
            b.path(),
        );
        assert_eq!(
            rows(&a.path().join("rank_one_series.csv")),
            rows(&b.path().join("rank_one_series.csv")),
            "{name}"
        );
    }
}

fn exit_code(args: &[&str]) -> i32 {
    let dir = tempfile::tempdir().unwrap();
    bin()
        .args(args)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap()
        .status
        .code()
        .unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(
        exit_code(&["renewal", "--dist", "poisson:1", "--n", "5"]),
        2
    );
    assert_eq!(exit_code(&["renewal", "--n", "5"]), 2);
    assert_eq!(exit_code(&["rank-one", "--preset", "nope"]), 2);
    assert_eq!(exit_code(&["translate", "--alpha", "1.5", "--N", "3"]), 2);
    assert_eq!(
        exit_code(&[
            "walk",
            "--dist",
            "geometric:0.5",
            "--N",
            "5000",
            "--j",
            "10"
        ]),
        3
    );
    assert_eq!(
        exit_code(&["rank-one", "--preset", "odometer", "--radius", "100"]),
        0
    );
    let wrong = fixture("configs/walk_geometric.json");
    assert_eq!(
        exit_code(&["renewal", "--config", wrong.to_str().unwrap()]),
        2
    );
    assert_eq!(exit_code(&["no-such-command"]), 2);
}
