//! Named, tolerance-tagged checks over every module, and a runner that
//! produces a machine-readable report.

mod checks;
pub mod theorems;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub use theorems::{check_fluctuation_theorem, check_symmetry, FluctuationReport, SymmetryReport};

/// Per-check tolerances of the default profile. Every check reads its
/// tolerance from here and nowhere else.
pub const TOLERANCES: &[(&str, f64)] = &[
    ("kernel_vs_oracle", 1e-6),
    ("path_equivalence", 1e-10),
    ("column_stochasticity", 1e-10),
    ("nonnegativity", 1e-12),
    ("identity_at_zero_time", 1e-15),
    ("long_time_column_independence", 1e-8),
    ("stationary_bose_einstein", 1e-15),
    ("charfn_normalization", 1e-15),
    ("charfn_symmetry", 1e-12),
    ("charfn_stationary_form", 1e-12),
    ("charfn_matrix_agreement", 1e-8),
    ("fourier_pair", 1e-10),
    ("fluctuation_theorem_asymptotic", 1e-12),
    ("fluctuation_theorem_finite", 1e-8),
    ("cumulants_vs_moments", 1e-8),
    ("cumulants_vs_finite_differences", 1e-7),
    ("stationary_limits", 1e-7),
    ("normalization", 1e-10),
    ("variance_monotone", 0.0),
    ("cumulant_envelope", 1e-15),
    ("temperature_swap", 1e-12),
    ("quantum_narrower_than_classical", 0.0),
    ("classical_limit", 1e-2),
    ("isothermal_peak", 1e-15),
    ("asymptotic_peak", 1e-14),
    ("low_temperature_agreement", 1.1e-7),
    ("oracle_generator_stationary", 1e-12),
    ("oracle_ground_state", 1e-7),
    ("oracle_stationary", 1e-10),
    ("oracle_relaxation_rate", 1e-8),
    ("oracle_leakage", 1e-8),
    ("oracle_entropy_monotone", 1e-12),
    ("bruteforce_vs_inversion", 1e-6),
    ("bruteforce_mean", 1e-6),
    ("bruteforce_long_time", 1e-7),
];

/// The strict profile divides every tolerance by this factor.
pub const STRICT_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    #[default]
    Default,
    Strict,
}

impl std::str::FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "default" => Ok(Profile::Default),
            "strict" => Ok(Profile::Strict),
            other => Err(format!("unknown tolerance profile {other:?} (expected default|strict)")),
        }
    }
}

/// Tolerance of `check` under `profile`.
pub fn tolerance(check: &str, profile: Profile) -> Result<f64> {
    let base = TOLERANCES
        .iter()
        .find(|(name, _)| *name == check)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::UnknownCheck(check.to_string()))?;
    Ok(match profile {
        Profile::Default => base,
        Profile::Strict => base / STRICT_FACTOR,
    })
}

pub fn check_names() -> impl Iterator<Item = &'static str> {
    TOLERANCES.iter().map(|(name, _)| *name)
}

/// What a check measured. `pass` additionally requires
/// `residual <= tolerance`.
pub(crate) struct Outcome {
    residual: f64,
    params: Value,
    detail: Option<String>,
    /// Conditions beyond the residual bound (e.g. a runtime budget).
    extra_ok: bool,
}

impl Outcome {
    fn new(residual: f64, params: Value) -> Self {
        Outcome {
            residual,
            params,
            detail: None,
            extra_ok: true,
        }
    }

    fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    fn require(mut self, ok: bool) -> Self {
        self.extra_ok &= ok;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub params: Value,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub profile: Profile,
    pub checks: Vec<CheckReport>,
    pub passed: usize,
    pub failed: usize,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn get(&self, check: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.check == check)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteConfig {
    /// Check names to run; empty means all.
    pub selection: Vec<String>,
    pub profile: Profile,
}

impl SuiteConfig {
    pub fn all(profile: Profile) -> Self {
        SuiteConfig {
            selection: Vec::new(),
            profile,
        }
    }

    pub fn only(name: &str, profile: Profile) -> Self {
        SuiteConfig {
            selection: vec![name.to_string()],
            profile,
        }
    }
}

/// Runs one named check. Numeric failures inside the check are reported
/// as a failed entry, not an error.
pub fn run_check(name: &str, profile: Profile) -> Result<CheckReport> {
    let tol = tolerance(name, profile)?;
    let start = Instant::now();
    let outcome = checks::run(name, tol);
    let seconds = start.elapsed().as_secs_f64();
    Ok(match outcome {
        Ok(o) => CheckReport {
            check: name.to_string(),
            params: o.params,
            pass: o.extra_ok && o.residual <= tol,
            residual: o.residual,
            tolerance: tol,
            seconds,
            detail: o.detail,
        },
        Err(e) => CheckReport {
            check: name.to_string(),
            params: Value::Null,
            residual: f64::NAN,
            tolerance: tol,
            pass: false,
            seconds,
            detail: Some(format!("{}: {e}", e.name())),
        },
    })
}

/// Runs the selected checks (in table order) and collects the report.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    for name in &config.selection {
        tolerance(name, config.profile)?;
    }
    let names: Vec<&str> = check_names()
        .filter(|n| config.selection.is_empty() || config.selection.iter().any(|s| s == n))
        .collect();
    let start = Instant::now();
    let checks: Vec<CheckReport> = names
        .par_iter()
        .map(|name| run_check(name, config.profile))
        .collect::<Result<_>>()?;
    let passed = checks.iter().filter(|c| c.pass).count();
    Ok(SuiteReport {
        profile: config.profile,
        failed: checks.len() - passed,
        passed,
        checks,
        seconds: start.elapsed().as_secs_f64(),
    })
}
