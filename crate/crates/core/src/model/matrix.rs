use rayon::prelude::*;
use serde::Serialize;

use super::kernel::{column_tail_bound, transition, KernelPath, KernelPolicy};
use super::params::{thermal_cutoff, thermal_tail, ModelParams};
use super::relaxation::relaxation_pair;
use crate::error::{Error, Result};

/// Entries below this are rounding noise; anything more negative is an error.
pub const NEGATIVE_TOLERANCE: f64 = 1e-12;

/// How the Fock cutoff was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationCertificate {
    pub epsilon: f64,
    /// Cutoff demanded by the initial thermal law at `β₁`.
    pub n_initial: usize,
    /// Cutoff demanded by the stationary law at `β₂`.
    pub n_stationary: usize,
    pub n_max: usize,
    /// `e^{−β₁(N+1)}`, initial mass above the cutoff.
    pub initial_tail: f64,
    /// `e^{−β₂(N+1)}`, stationary mass above the cutoff.
    pub stationary_tail: f64,
}

impl TruncationCertificate {
    pub fn for_params(params: &ModelParams, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParams {
                name: "epsilon",
                value: epsilon,
                reason: "must lie in (0, 1)",
            });
        }
        let n_initial = thermal_cutoff(params.beta1(), epsilon);
        let n_stationary = thermal_cutoff(params.beta2(), epsilon);
        let n_max = n_initial.max(n_stationary);
        Ok(TruncationCertificate {
            epsilon,
            n_initial,
            n_stationary,
            n_max,
            initial_tail: thermal_tail(params.beta1(), n_max),
            stationary_tail: thermal_tail(params.beta2(), n_max),
        })
    }
}

/// An entry pushed back into `[0, 1]`, recorded rather than hidden.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClampEvent {
    pub m: usize,
    pub n: usize,
    pub raw: f64,
}

/// `X[m][n]` for `0 ≤ m, n ≤ N_max`, column `n` being the final-state law
/// of Fock state `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionMatrix {
    n_max: usize,
    tau: f64,
    /// Row-major, `entries[m * (n_max + 1) + n]`.
    entries: Vec<f64>,
    /// Certified bound on the mass of column `n` above row `N_max`.
    column_leakage: Vec<f64>,
    /// Thermally weighted discarded mass: columns above `N_max` plus the
    /// column leakages.
    leakage: f64,
    paths: Vec<KernelPath>,
    clamped: Vec<ClampEvent>,
    certificate: Option<TruncationCertificate>,
}

/// Matrix with `N_max` chosen from the truncation certificate at `epsilon`.
pub fn build_transition_matrix(params: &ModelParams, epsilon: f64) -> Result<TransitionMatrix> {
    let certificate = TruncationCertificate::for_params(params, epsilon)?;
    let mut tm = TransitionMatrix::with_size(params, certificate.n_max, &KernelPolicy::default())?;
    tm.certificate = Some(certificate);
    Ok(tm)
}

impl TransitionMatrix {
    pub fn with_size(params: &ModelParams, n_max: usize, policy: &KernelPolicy) -> Result<Self> {
        let pair = relaxation_pair(params);
        let dim = n_max + 1;
        let columns: Vec<Vec<(f64, KernelPath)>> = (0..dim)
            .into_par_iter()
            .map(|n| {
                (0..dim)
                    .map(|m| {
                        transition(m, n, &pair, policy)
                            .map(|kv| (kv.value, kv.path))
                            .map_err(|e| e.at(m, n))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        let mut entries = vec![0.0; dim * dim];
        let mut paths = vec![KernelPath::Identity; dim * dim];
        let mut clamped = Vec::new();
        for (n, column) in columns.iter().enumerate() {
            for (m, &(raw, path)) in column.iter().enumerate() {
                if raw < -NEGATIVE_TOLERANCE {
                    return Err(Error::NegativeProbability { m, n, value: raw });
                }
                let value = raw.clamp(0.0, 1.0);
                if value != raw {
                    clamped.push(ClampEvent { m, n, raw });
                }
                entries[m * dim + n] = value;
                paths[m * dim + n] = path;
            }
        }

        let column_leakage: Vec<f64> = (0..dim).map(|n| column_tail_bound(n, n_max, &pair)).collect();
        let q = (-params.beta1()).exp();
        let weighted: f64 = column_leakage
            .iter()
            .enumerate()
            .map(|(n, leak)| (1.0 - q) * q.powi(n as i32) * leak)
            .sum();
        let leakage = weighted + thermal_tail(params.beta1(), n_max);

        Ok(TransitionMatrix {
            n_max,
            tau: params.tau(),
            entries,
            column_leakage,
            leakage,
            paths,
            clamped,
            certificate: None,
        })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.entries[m * (self.n_max + 1) + n]
    }

    pub fn path(&self, m: usize, n: usize) -> KernelPath {
        self.paths[m * (self.n_max + 1) + n]
    }

    pub fn column(&self, n: usize) -> Vec<f64> {
        (0..=self.n_max).map(|m| self.get(m, n)).collect()
    }

    pub fn column_leakage(&self, n: usize) -> f64 {
        self.column_leakage[n]
    }

    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    pub fn clamped(&self) -> &[ClampEvent] {
        &self.clamped
    }

    pub fn certificate(&self) -> Option<&TruncationCertificate> {
        self.certificate.as_ref()
    }

    /// `1 − Σ_m X[m][n]` for every column, summed with compensation.
    pub fn column_deficits(&self) -> Vec<f64> {
        (0..=self.n_max)
            .map(|n| 1.0 - crate::summation::neumaier_sum(&self.column(n)))
            .collect()
    }
}
