use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dclifford(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dclifford"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn without_time(path: &Path) -> Value {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("wall_time_s");
    v
}

const QUICK: [&str; 10] = [
    "verify",
    "--dim",
    "2",
    "--algebra-dim",
    "2",
    "--h",
    "1",
    "--trials",
    "3",
    "--seed",
];

#[test]
fn verify_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut a = QUICK.to_vec();
    a.extend(["7", "--report", "a.json"]);
    let mut b = QUICK.to_vec();
    b.extend(["7", "--report", "b.json"]);
    let out = dclifford(&a, dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(code(&dclifford(&b, dir.path())), 0);
    let ra = without_time(&dir.path().join("a.json"));
    assert_eq!(ra, without_time(&dir.path().join("b.json")));
    assert_eq!(ra["schema"], 1);
    assert_eq!(ra["config"]["seed"], 7);
    let statuses: Vec<&str> = ra["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["status"].as_str().unwrap())
        .collect();
    assert!(statuses.contains(&"pass") && statuses.contains(&"report-only"));
    assert!(!statuses.contains(&"fail"));
}

#[test]
fn verify_with_the_documented_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = dclifford(
        &[
            "verify",
            "--dim",
            "2",
            "--h",
            "1",
            "--trials",
            "100",
            "--seed",
            "7",
            "--suite",
            "lattice,symbolic",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("report.json").exists());
}

#[test]
fn injected_mutation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    for mutation in ["leibniz-no-involution", "laplacian-half"] {
        let out = dclifford(
            &[
                "verify",
                "--dim",
                "1",
                "--suite",
                "symbolic",
                "--inject-mutation",
                mutation,
            ],
            dir.path(),
        );
        assert_eq!(code(&out), 1, "{mutation}");
    }
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&dclifford(&["verify", "--dim", "0"], dir.path())), 2);
    assert_eq!(code(&dclifford(&["verify", "--h", "-1"], dir.path())), 2);
    assert_eq!(
        code(&dclifford(&["solve-kg", "--box", "4:-4"], dir.path())),
        2
    );
    assert_eq!(
        code(&dclifford(
            &["solve-kg", "--dim", "2", "--box", "0:3,0:3,0:3"],
            dir.path()
        )),
        2
    );
    assert_eq!(
        code(&dclifford(&["solve-kg", "--amplitude", "9:1"], dir.path())),
        2
    );
    assert_eq!(
        code(&dclifford(&["dispersion", "--grid", "5"], dir.path())),
        2
    );
    assert_eq!(code(&dclifford(&["frobnicate"], dir.path())), 2);
}

#[test]
fn unwritable_output_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = dclifford(&["solve-kg", "--out", "missing/dir/field.csv"], dir.path());
    assert_eq!(code(&out), 3);
    let out = dclifford(
        &[
            "verify",
            "--suite",
            "witt",
            "--algebra-dim",
            "1",
            "--report",
            "missing/r.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 3);
}

#[test]
#[allow(clippy::approx_constant)] // the documented CLI mass, not an approximation of √2
fn solve_kg_reproduces_the_worked_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let out = dclifford(
        &[
            "solve-kg",
            "--dim",
            "1",
            "--h",
            "1",
            "--mass",
            "1.4142135",
            "--box",
            "-4:4",
            "--report",
            "kg.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(dir.path().join("field.csv")).unwrap();
    assert_eq!(
        reader.headers().unwrap(),
        vec!["k1", "blade_mask", "re", "im"]
    );
    let mut values = std::collections::BTreeMap::new();
    for row in reader.records() {
        let row = row.unwrap();
        let k: i64 = row[0].parse().unwrap();
        values.insert(k, row[2].parse::<f64>().unwrap());
    }
    // T_k(λ) with λ = 1 + (1.4142135)²/2, expanded by the recurrence.
    let lam = 1.0 + 1.4142135f64.powi(2) / 2.0;
    let mut t = vec![1.0, lam];
    for k in 1..4 {
        t.push(2.0 * lam * t[k] - t[k - 1]);
    }
    for k in 0..=4i64 {
        let expected = t[k.unsigned_abs() as usize];
        assert!((values[&k] - expected).abs() < 1e-9 * expected, "k={k}");
        assert!((values[&-k] - expected).abs() < 1e-9 * expected, "k={}", -k);
    }
    for (k, target) in [(0, 1.0), (1, 2.0), (2, 7.0), (3, 26.0)] {
        assert_eq!(values[&k].round(), target);
    }
    let report = without_time(&dir.path().join("kg.json"));
    assert!(report["checks"][0]["max_residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn solve_dirac_writes_both_components() {
    let dir = tempfile::tempdir().unwrap();
    let out = dclifford(
        &[
            "solve-dirac",
            "--dim",
            "2",
            "--mass",
            "1",
            "--box",
            "-3:3",
            "--out",
            "sol.csv",
            "--report",
            "d.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("sol.plus.csv").exists());
    assert!(dir.path().join("sol.minus.csv").exists());
    let report = without_time(&dir.path().join("d.json"));
    let status = |id: &str| {
        report["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["id"] == id)
            .unwrap()["status"]
            .clone()
    };
    assert_eq!(status("solve.cross-coupled"), "pass");
    assert_eq!(status("solve.coupled"), "report-only");

    // The staggered mass term is measured, never asserted.
    let out = dclifford(
        &[
            "solve-dirac",
            "--dim",
            "1",
            "--mass",
            "1",
            "--mass-term",
            "chi",
            "--convention",
            "shifted",
            "--out",
            "chi.csv",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
}

#[test]
fn dispersion_counts_central_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let out = dclifford(
        &[
            "dispersion",
            "--dim",
            "1",
            "--grid",
            "64",
            "--operator",
            "central",
            "--zeros",
            "--out",
            "curve.csv",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let scan: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(scan["count"], 2);
    assert_eq!(scan["raw_count"], 3);
    let curve = std::fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    assert_eq!(curve.lines().next().unwrap(), "xi1,magnitude");
    assert_eq!(curve.lines().count(), 65);
}

#[test]
fn opcalc_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dclifford(&["opcalc", "--check", "leibniz", "--dim", "3"], dir.path());
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("leibniz+ n=3: equal"));
    for check in ["nilpotent", "laplacian"] {
        assert_eq!(
            code(&dclifford(
                &["opcalc", "--check", check, "--dim", "2"],
                dir.path()
            )),
            0
        );
    }
    let out = dclifford(
        &[
            "opcalc",
            "--check",
            "laplacian",
            "--dim",
            "1",
            "--inject-mutation",
            "laplacian-half",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("not equal"));
}
