use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::stats::{charfn, symmetry_partner, HeatDistribution};

/// Fewest lattice pairs `(k, −k)` a fluctuation-theorem check accepts.
pub const MIN_FT_PAIRS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluctuationReport {
    /// `(k, ln P_k − ln P_{−k} + Δβħω k)` for every tested `k ≥ 1`.
    pub residuals: Vec<(i64, f64)>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Tests `P(kħω)/P(−kħω) = e^{−Δβħω k}` on every pair with both masses
/// at least `min_mass`; `delta_beta` is the dimensionless `Δβħω`.
///
/// Masses obtained by inversion carry an absolute error near `1e−17`, so
/// their log-ratios are only meaningful well above that; closed-form laws
/// can use a threshold down at the underflow level.
pub fn check_fluctuation_theorem(
    dist: &HeatDistribution,
    delta_beta: f64,
    tol: f64,
    min_mass: f64,
) -> Result<FluctuationReport> {
    let residuals: Vec<(i64, f64)> = (1..=dist.k_max() as i64)
        .filter(|&k| dist.mass(k) >= min_mass && dist.mass(-k) >= min_mass)
        .map(|k| {
            let r = dist.mass(k).ln() - dist.mass(-k).ln() + delta_beta * k as f64;
            (k, r.abs())
        })
        .collect();
    if residuals.len() < MIN_FT_PAIRS {
        return Err(Error::InsufficientSupport {
            found: residuals.len(),
            required: MIN_FT_PAIRS,
        });
    }
    let max_residual = residuals.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(FluctuationReport {
        pass: max_residual <= tol,
        residuals,
        max_residual,
        tolerance: tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub samples: usize,
    /// `max |G(−iΔβ − μ) − G(μ)|`.
    pub max_residual: f64,
    /// `max |G(−μ) − conj G(μ)|`, zero for any real law.
    pub max_conjugation_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Exchange symmetry of the characteristic function over real samples.
pub fn check_symmetry(params: &ModelParams, mu_samples: &[f64], tol: f64) -> Result<SymmetryReport> {
    let mut max_residual: f64 = 0.0;
    let mut max_conj: f64 = 0.0;
    for &mu in mu_samples {
        let mu = Complex64::new(mu, 0.0);
        let g = charfn(params, mu)?.value;
        let partner = charfn(params, symmetry_partner(params, mu))?.value;
        let mirrored = charfn(params, -mu)?.value;
        max_residual = max_residual.max((g - partner).norm());
        max_conj = max_conj.max((mirrored - g.conj()).norm());
    }
    Ok(SymmetryReport {
        samples: mu_samples.len(),
        pass: max_residual <= tol && max_conj <= tol,
        max_residual,
        max_conjugation_residual: max_conj,
        tolerance: tol,
    })
}
