use assert_cmd::Command;
use serde_json::Value;

fn qheat() -> Command {
    Command::cargo_bin("qheat").unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = qheat().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    qheat().args(args).output().unwrap().status.code().unwrap()
}

const DIST: &[&str] = &["dist", "--beta1", "1", "--beta2", "3", "--tau", "0.7"];

#[test]
fn identical_flags_give_identical_bytes() {
    for args in [
        DIST,
        &[
            "cumulants",
            "--beta1",
            "1",
            "--beta2",
            "3",
            "--tau-grid",
            "0:2:0.1",
            "--format",
            "json",
        ],
    ] {
        assert_eq!(stdout(args), stdout(args));
    }
    let one = qheat().env("QHEAT_THREADS", "1").args(DIST).output().unwrap().stdout;
    let four = qheat().env("QHEAT_THREADS", "4").args(DIST).output().unwrap().stdout;
    assert_eq!(one, four);
}

#[test]
fn csv_and_json_agree_exactly() {
    let csv = stdout(DIST);
    let json: Value = serde_json::from_str(&stdout(&[DIST, &["--format", "json"]].concat())).unwrap();
    let points = json["points"].as_array().unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), points.len());
    for (row, point) in rows.iter().zip(points) {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells[0].parse::<i64>().unwrap(), point["k"].as_i64().unwrap());
        assert_eq!(cells[1].parse::<f64>().unwrap(), point["Q"].as_f64().unwrap());
        assert_eq!(cells[2].parse::<f64>().unwrap(), point["P"].as_f64().unwrap());
    }

    let grid = ["cumulants", "--beta1", "1", "--beta2", "2.5", "--tau-grid", "0:3:0.5"];
    let csv = stdout(&grid);
    let json: Value = serde_json::from_str(&stdout(&[&grid[..], &["--format", "json"]].concat())).unwrap();
    for (line, row) in csv.lines().skip(1).zip(json["rows"].as_array().unwrap()) {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        for (i, key) in ["tau", "mean", "variance", "mean_inf", "variance_inf"]
            .iter()
            .enumerate()
        {
            assert_eq!(cells[i], row[key].as_f64().unwrap(), "{key}");
        }
    }
}

#[test]
fn json_metadata_block() {
    let json: Value = serde_json::from_str(&stdout(&[
        "dist",
        "--beta1",
        "1",
        "--beta2",
        "2.5",
        "--tau",
        "inf",
        "--mode",
        "asymptotic",
        "--format",
        "json",
    ]))
    .unwrap();
    let meta = &json["metadata"];
    assert_eq!(meta["tool"]["name"], "qheat");
    assert_eq!(meta["tool"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(meta["params"]["tau"], "inf");
    assert_eq!(meta["mode"], "asymptotic");
    assert_eq!(meta["provenance"], "asymptotic");
    assert!(meta["truncation_error"].as_f64().unwrap() < 1e-13);
    let total = meta["total"].as_f64().unwrap();
    assert!((total - 1.0).abs() <= 1e-10 + meta["truncation_error"].as_f64().unwrap());
}

#[test]
fn zero_time_is_a_single_mass() {
    let csv = stdout(&["dist", "--beta1", "1", "--beta2", "3", "--tau", "0", "--kmax", "2"]);
    assert_eq!(
        csv,
        "k,Q,P\n-2,-2.0,0.0\n-1,-1.0,0.0\n0,0.0,1.0\n1,1.0,0.0\n2,2.0,0.0\n"
    );
}

#[test]
fn hbar_omega_scales_the_lattice_only() {
    let unit = stdout(&["dist", "--beta1", "1", "--beta2", "3", "--tau", "inf", "--kmax", "3"]);
    let scaled = stdout(&[
        "dist",
        "--beta1",
        "1",
        "--beta2",
        "3",
        "--tau",
        "inf",
        "--kmax",
        "3",
        "--hbar-omega",
        "2",
    ]);
    for (a, b) in unit.lines().skip(1).zip(scaled.lines().skip(1)) {
        let a: Vec<f64> = a.split(',').map(|c| c.parse().unwrap()).collect();
        let b: Vec<f64> = b.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!((a[0], 2.0 * a[1], a[2]), (b[0], b[1], b[2]));
    }
}

#[test]
fn single_point_grid() {
    let csv = stdout(&["cumulants", "--beta1", "1", "--beta2", "3", "--tau-grid", "1:1:0.1"]);
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("1.0,"));
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    qheat().args(DIST).arg("--out").arg(&path).assert().success().stdout("");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(DIST));
}

#[test]
fn charfn_samples_start_at_one() {
    let csv = stdout(&[
        "charfn",
        "--beta1",
        "1",
        "--beta2",
        "3",
        "--tau",
        "0.7",
        "--mu-grid",
        "-1:1:0.5",
    ]);
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[2], vec![0.0, 1.0, 0.0]);
    // G(−μ) = conj G(μ) for a real law.
    assert!((rows[0][1] - rows[4][1]).abs() < 1e-15 && (rows[0][2] + rows[4][2]).abs() < 1e-15);
}

#[test]
fn usage_errors_exit_with_one() {
    let cases: &[&[&str]] = &[
        &["dist", "--beta1", "1", "--tau", "1"],
        &["dist", "--beta1", "1", "--beta2", "3", "--tau", "-1"],
        &["dist", "--beta1", "-1", "--beta2", "3", "--tau", "1"],
        &[
            "dist",
            "--beta1",
            "1",
            "--beta2",
            "3",
            "--tau",
            "1",
            "--mode",
            "asymptotic",
        ],
        &[
            "dist",
            "--beta1",
            "1",
            "--beta2",
            "3",
            "--tau",
            "inf",
            "--mode",
            "isothermal",
        ],
        &["dist", "--beta1", "1", "--beta2", "3", "--tau", "1", "--format", "xml"],
        &["cumulants", "--beta1", "1", "--beta2", "3", "--tau-grid", "8:0:0.05"],
        &["verify", "--suite", "no_such_check"],
        &["verify", "--tol-profile", "lenient"],
        &["frobnicate"],
        &[],
    ];
    for args in cases {
        assert_eq!(exit_code(args), 1, "{args:?}");
    }
    qheat().env("QHEAT_THREADS", "zero").args(DIST).assert().code(1);
}

#[test]
fn help_and_version_exit_cleanly() {
    assert_eq!(exit_code(&["--help"]), 0);
    assert_eq!(exit_code(&["--version"]), 0);
    assert_eq!(exit_code(&["dist", "--help"]), 0);
}

#[test]
fn numeric_failures_exit_with_two_and_name_the_error() {
    // A window of 3 cannot hold this law.
    let out = qheat()
        .args(["dist", "--beta1", "1", "--beta2", "3", "--tau", "2", "--kmax", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("AliasingDetected"));
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_reports_one_check() {
    let out = qheat().args(["verify", "--suite", "charfn_symmetry"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    for key in ["check", "params", "residual", "tolerance", "pass", "seconds"] {
        assert!(checks[0].get(key).is_some(), "{key}");
    }
    assert_eq!(checks[0]["tolerance"].as_f64().unwrap(), 1e-12);

    let strict: Value = serde_json::from_slice(
        &qheat()
            .args(["verify", "--suite", "charfn_symmetry", "--tol-profile", "strict"])
            .output()
            .unwrap()
            .stdout,
    )
    .unwrap();
    assert_eq!(strict["profile"], "strict");
    assert_eq!(strict["checks"][0]["tolerance"].as_f64().unwrap(), 1e-13);
}

#[test]
fn verify_all_passes() {
    let out = qheat().args(["verify"]).output().unwrap();
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["failed"], 0, "{report:#}");
    assert_eq!(out.status.code(), Some(0));
}
