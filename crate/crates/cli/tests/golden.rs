//! Golden CSVs for the reference parameter sets. Regenerate with
//! `QHEAT_BLESS=1 cargo test -p qheat-cli --test golden regenerated`;
//! the oracle cross-checks below must pass before a new file is committed.

use std::fs;
use std::path::PathBuf;

use assert_cmd::Command;
use qheat_core::oracle::heat_distribution_bruteforce;
use qheat_core::stats::{asymptotic_prefactor, mean_heat, variance_heat};
use qheat_core::ModelParams;

const GOLDENS: &[(&str, &[&str])] = &[
    (
        "stationary_b1_1_b2_2.5.csv",
        &[
            "dist",
            "--beta1",
            "1",
            "--beta2",
            "2.5",
            "--tau",
            "inf",
            "--mode",
            "asymptotic",
        ],
    ),
    (
        "isothermal_b_2.5.csv",
        &[
            "dist",
            "--beta1",
            "2.5",
            "--beta2",
            "2.5",
            "--tau",
            "inf",
            "--mode",
            "isothermal",
        ],
    ),
    (
        "classical_b1_1_b2_2.5.csv",
        &[
            "dist",
            "--beta1",
            "1",
            "--beta2",
            "2.5",
            "--tau",
            "inf",
            "--mode",
            "classical",
        ],
    ),
    (
        "dist_b1_1_b2_3_tau_0.1.csv",
        &["dist", "--beta1", "1", "--beta2", "3", "--tau", "0.1"],
    ),
    (
        "dist_b1_1_b2_3_tau_2.csv",
        &["dist", "--beta1", "1", "--beta2", "3", "--tau", "2"],
    ),
    (
        "cumulants_b1_1_b2_3.csv",
        &["cumulants", "--beta1", "1", "--beta2", "3", "--tau-grid", "0:8:0.05"],
    ),
];

/// Relative agreement demanded of a regenerated value against its golden.
const GOLDEN_RTOL: f64 = 1e-12;
const GOLDEN_ATOL: f64 = 1e-16;

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn run(args: &[&str]) -> String {
    let out = Command::cargo_bin("qheat").unwrap().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Csv {
    fn parse(text: &str) -> Csv {
        let mut lines = text.lines();
        let header = lines.next().unwrap().split(',').map(str::to_string).collect();
        let rows = lines
            .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
            .collect();
        Csv { header, rows }
    }

    fn load(name: &str) -> Csv {
        let text = fs::read_to_string(golden_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        Csv::parse(&text)
    }

    fn column(&self, name: &str) -> Vec<f64> {
        let i = self.header.iter().position(|h| h == name).unwrap();
        self.rows.iter().map(|r| r[i]).collect()
    }

    /// `(k, P)` pairs of a distribution file.
    fn masses(&self) -> Vec<(i64, f64)> {
        self.column("k")
            .into_iter()
            .map(|k| k as i64)
            .zip(self.column("P"))
            .collect()
    }
}

#[test]
fn regenerated_output_matches_goldens() {
    let bless = std::env::var_os("QHEAT_BLESS").is_some();
    for (name, args) in GOLDENS {
        let text = run(args);
        if bless {
            fs::create_dir_all(golden_path("")).unwrap();
            fs::write(golden_path(name), &text).unwrap();
            continue;
        }
        let fresh = Csv::parse(&text);
        let golden = Csv::load(name);
        assert_eq!(fresh.header, golden.header, "{name}");
        assert_eq!(fresh.rows.len(), golden.rows.len(), "{name}");
        for (i, (a, b)) in fresh.rows.iter().zip(&golden.rows).enumerate() {
            for (x, y) in a.iter().zip(b) {
                let ok = (x - y).abs() <= GOLDEN_ATOL + GOLDEN_RTOL * y.abs();
                assert!(ok, "{name} row {i}: {x:e} vs golden {y:e}");
            }
        }
    }
}

fn params(b1: f64, b2: f64, tau: f64) -> ModelParams {
    ModelParams::new(b1, b2, tau).unwrap()
}

/// Largest pointwise gap between a golden distribution and the
/// master-equation law, plus the golden's total.
fn against_bruteforce(name: &str, p: &ModelParams) -> (f64, f64) {
    let golden = Csv::load(name).masses();
    let brute = heat_distribution_bruteforce(p, 40).unwrap();
    let in_window = golden
        .iter()
        .map(|&(k, pk)| (pk - brute.mass(k)).abs())
        .fold(0.0, f64::max);
    let k_max = golden.last().unwrap().0;
    let outside = (k_max + 1..=brute.k_max() as i64)
        .map(|k| brute.mass(k) + brute.mass(-k))
        .fold(0.0, f64::max);
    (in_window.max(outside), golden.iter().map(|m| m.1).sum())
}

#[test]
fn golden_files_agree_with_the_oracle() {
    let finite = [("dist_b1_1_b2_3_tau_0.1.csv", 0.1), ("dist_b1_1_b2_3_tau_2.csv", 2.0)];
    for (name, tau) in finite {
        let (gap, total) = against_bruteforce(name, &params(1.0, 3.0, tau));
        assert!(gap <= 1e-6, "{name}: {gap:e}");
        assert!((total - 1.0).abs() <= 1e-10, "{name}: {total}");
    }

    // Stationary files against the master equation run to τ = 20, where the
    // remaining relaxation is of order e^{−20}.
    let stationary = [
        ("stationary_b1_1_b2_2.5.csv", 1.0, 2.5),
        ("isothermal_b_2.5.csv", 2.5, 2.5),
    ];
    for (name, b1, b2) in stationary {
        let (gap, total) = against_bruteforce(name, &params(b1, b2, 20.0));
        assert!(gap <= 1e-7, "{name}: {gap:e}");
        assert!((total - 1.0).abs() <= 1e-10, "{name}: {total}");
    }

    let asym = Csv::load("stationary_b1_1_b2_2.5.csv").masses();
    let peak = asym.iter().find(|m| m.0 == 0).unwrap().1;
    assert!((peak - 0.5983).abs() < 5e-5, "{peak}");
    assert_eq!(peak, asymptotic_prefactor(1.0, 2.5));

    let iso = Csv::load("isothermal_b_2.5.csv").masses();
    let n = iso.len();
    assert!(
        (0..n).all(|i| iso[i].1 == iso[n - 1 - i].1),
        "isothermal law must be symmetric"
    );

    let classical = Csv::load("classical_b1_1_b2_2.5.csv");
    assert_eq!(classical.header, ["k", "Q", "P", "envelope"]);
    assert_eq!(
        classical.column("P"),
        Csv::load("stationary_b1_1_b2_2.5.csv").column("P")
    );
    // Same exponential envelope on each side of the peak.
    let (env, p) = (classical.column("envelope"), classical.column("P"));
    let mid = env.len() / 2;
    for i in (1..mid).chain(mid + 2..env.len()) {
        let (re, rp) = (env[i] / env[i - 1], p[i] / p[i - 1]);
        assert!((re - rp).abs() <= 1e-12 * rp, "row {i}: {re} vs {rp}");
    }
}

#[test]
fn cumulant_golden_agrees_with_the_oracle() {
    let golden = Csv::load("cumulants_b1_1_b2_3.csv");
    assert_eq!(golden.header, ["tau", "mean", "variance", "mean_inf", "variance_inf"]);
    assert_eq!(golden.rows.len(), 161);
    let variance = golden.column("variance");
    assert!(variance.windows(2).all(|w| w[1] >= w[0]));
    for row in golden
        .rows
        .iter()
        .filter(|r| [0.5, 1.0, 2.0, 8.0].iter().any(|t| (r[0] - t).abs() < 1e-9))
    {
        let p = params(1.0, 3.0, row[0]);
        let brute = heat_distribution_bruteforce(&p, 40).unwrap();
        assert!(
            (row[1] - brute.mean()).abs() <= 1e-6,
            "tau={}: {} vs {}",
            row[0],
            row[1],
            brute.mean()
        );
        assert!(
            (row[2] - brute.variance()).abs() <= 1e-6,
            "tau={}: {} vs {}",
            row[0],
            row[2],
            brute.variance()
        );
        assert_eq!(row[1], mean_heat(&p));
        assert_eq!(row[2], variance_heat(&p));
    }
}
