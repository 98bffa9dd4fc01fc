//! Mean and variance of the heat, their long-time limits, and a finite
//! difference cross-check against the characteristic function.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{relaxation_pair, ModelParams};
use crate::stats::charfn::charfn_minus_one;

/// Step in `μħω` for the finite-difference cumulants.
pub const FD_STEP: f64 = 1e-4;
/// Relative disagreement (floored at absolute) that counts as a mismatch.
pub const CUMULANT_TOLERANCE: f64 = 1e-7;

/// `q = e^{−β₁ħω}` and `1 − q`.
fn initial_weights(params: &ModelParams) -> (f64, f64) {
    let b1 = params.beta1();
    ((-b1).exp(), -(-b1).exp_m1())
}

/// `⟨Q⟩(τ) = ħω (u e^{β₁ħω} − v − 1)/(e^{β₁ħω} − 1)`, evaluated after
/// dividing through by `e^{β₁ħω}`.
pub fn mean_heat(params: &ModelParams) -> f64 {
    let pair = relaxation_pair(params);
    let (q, one_minus_q) = initial_weights(params);
    params.hbar_omega() * (pair.u - pair.one_plus_v() * q) / one_minus_q
}

/// `σ²_Q(τ)`, the closed form divided through by `e^{2β₁ħω}`:
/// `(ħω)² [u(u+1) + (1 + v − u(2v+3)) q + v(v+1) q²] / (1 − q)²`.
pub fn variance_heat(params: &ModelParams) -> f64 {
    let pair = relaxation_pair(params);
    let (u, v, w) = (pair.u, pair.v, pair.one_plus_v());
    let (q, one_minus_q) = initial_weights(params);
    let bracket = u * (u + 1.0) + (w - u * (2.0 * w + 1.0)) * q + v * w * q * q;
    params.hbar_omega().powi(2) * bracket / (one_minus_q * one_minus_q)
}

/// `ħω(n̄₂ − n̄₁)`, i.e. `½ħω[coth(β₂ħω/2) − coth(β₁ħω/2)]`.
pub fn stationary_mean(params: &ModelParams) -> f64 {
    params.hbar_omega() * (params.nbar2() - params.nbar1())
}

/// `(ħω)² [n̄₁(n̄₁+1) + n̄₂(n̄₂+1)]`, symmetric in the two temperatures.
pub fn stationary_variance(params: &ModelParams) -> f64 {
    let (n1, n2) = (params.nbar1(), params.nbar2());
    params.hbar_omega().powi(2) * (n1 * (n1 + 1.0) + n2 * (n2 + 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdMoments {
    pub mean: f64,
    pub variance: f64,
}

/// Mean and variance from central differences of `G − 1` at `μ = 0`,
/// with steps `h, 2h, 4h` and two Richardson levels.
pub fn fd_moments(params: &ModelParams, h: f64) -> FdMoments {
    let first = |h: f64| {
        let d = (charfn_minus_one(params, h) - charfn_minus_one(params, -h)) / (2.0 * h);
        d.im
    };
    let second = |h: f64| {
        let d = (charfn_minus_one(params, h) + charfn_minus_one(params, -h)) / (h * h);
        -d.re
    };
    let richardson = |f: &dyn Fn(f64) -> f64| {
        let (d1, d2, d4) = (f(h), f(2.0 * h), f(4.0 * h));
        let r1 = (4.0 * d1 - d2) / 3.0;
        let r2 = (4.0 * d2 - d4) / 3.0;
        (16.0 * r1 - r2) / 15.0
    };
    let m1 = richardson(&first);
    let m2 = richardson(&second);
    let scale = params.hbar_omega();
    FdMoments {
        mean: scale * m1,
        variance: scale * scale * (m2 - m1 * m1),
    }
}

/// Validated ascending grid of contact times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauGrid(Vec<f64>);

impl TauGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        let valid = !points.is_empty()
            && points.iter().all(|t| t.is_finite() && *t >= 0.0)
            && points.windows(2).all(|w| w[0] < w[1]);
        if valid {
            Ok(TauGrid(points))
        } else {
            Err(Error::InvalidGrid)
        }
    }

    /// `start, start + step, …` up to `stop`, which is included when it
    /// lies on the grid (up to rounding).
    pub fn range(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) || stop < start || step <= 0.0 {
            return Err(Error::InvalidGrid);
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        TauGrid::new((0..=count).map(|i| start + i as f64 * step).collect())
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CumulantTrace {
    pub tau_grid: Vec<f64>,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    pub mean_inf: f64,
    pub variance_inf: f64,
    /// `C` in `|⟨Q⟩(τ) − ⟨Q⟩_∞| ≤ C e^{−τ}`; the bound is an equality since
    /// `⟨Q⟩(τ) = (1 − e^{−τ}) ħω(n̄₂ − n̄₁)`.
    pub envelope_constant: f64,
    /// Largest finite-difference disagreement seen, relative to
    /// `max(1, |value|)`.
    pub max_fd_residual: f64,
}

/// Closed-form cumulants on `grid`, each cross-checked against
/// [`fd_moments`].
pub fn cumulant_trace(params: &ModelParams, grid: &TauGrid) -> Result<CumulantTrace> {
    let rows: Vec<(f64, f64, f64)> = grid
        .points()
        .par_iter()
        .map(|&tau| -> Result<(f64, f64, f64)> {
            let p = params.at_tau(tau)?;
            let (mean, variance) = (mean_heat(&p), variance_heat(&p));
            let fd = fd_moments(&p, FD_STEP);
            let mut worst: f64 = 0.0;
            for (what, closed, numeric) in [("mean", mean, fd.mean), ("variance", variance, fd.variance)] {
                let residual = (closed - numeric).abs() / closed.abs().max(1.0);
                if residual > CUMULANT_TOLERANCE {
                    return Err(Error::CumulantMismatch {
                        what,
                        tau,
                        closed,
                        numeric,
                    });
                }
                worst = worst.max(residual);
            }
            Ok((mean, variance, worst))
        })
        .collect::<Result<_>>()?;
    let mean_inf = stationary_mean(params);
    Ok(CumulantTrace {
        tau_grid: grid.points().to_vec(),
        mean: rows.iter().map(|r| r.0).collect(),
        variance: rows.iter().map(|r| r.1).collect(),
        mean_inf,
        variance_inf: stationary_variance(params),
        envelope_constant: mean_inf.abs(),
        max_fd_residual: rows.iter().map(|r| r.2).fold(0.0, f64::max),
    })
}
