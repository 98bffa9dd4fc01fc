//! Lattice masses as Fourier coefficients of the characteristic function.
//!
//! Heat lives on `Q = kħω`, so `G` is `2π/ħω`-periodic in `μ` and
//! `P_k = (1/L) Σ_j G(θ_j) e^{−iθ_j k}` with `θ_j = 2πj/L` is exact up to
//! aliasing from `|k| ≥ L − K`, which decays geometrically.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::stats::asymptotic::asymptotic_distribution;
use crate::stats::charfn::charfn_on_real_grid;
use crate::stats::distribution::{HeatDistribution, Horizon, Provenance};
use crate::summation::ComplexNeumaierSum;

/// Largest tolerated imaginary part of an inverted mass.
pub const IMAGINARY_TOLERANCE: f64 = 1e-10;
/// Largest tolerated mass at the window edge `|k| = K`.
pub const ALIASING_TOLERANCE: f64 = 1e-10;
/// Inverted masses in `(−NEGATIVE_ROUNDING, 0)` are rounding noise.
const NEGATIVE_ROUNDING: f64 = 1e-13;

/// Smallest `k ≥ 8` with `max(e^{−β₁k}, e^{−β₂k}) < 1e−14`.
pub fn default_k_max(params: &ModelParams) -> usize {
    let beta = params.beta1().min(params.beta2());
    let k = (1e14f64.ln() / beta).floor() as usize + 1;
    k.max(8)
}

pub fn default_quadrature_points(k_max: usize) -> usize {
    (4 * k_max).max(64)
}

/// Certified bound on the mass outside `[−K, K]` at contact time `tau`.
///
/// `Q > K` needs a final level above `K`, and the final marginal is thermal
/// with occupation `n̄₁e^{−τ} + n̄₂(1 − e^{−τ})`; `Q < −K` needs an initial
/// level above `K`.
pub(crate) fn lattice_tail_bound(params: &ModelParams, k_max: usize) -> f64 {
    let decay = (-params.tau()).exp();
    let nbar = params.nbar1() * decay + params.nbar2() * -(-params.tau()).exp_m1();
    let ratio = nbar / (1.0 + nbar);
    let up = ratio.powi(k_max as i32 + 1);
    let down = (-params.beta1() * (k_max as f64 + 1.0)).exp();
    up + down
}

/// Inverts the closed-form characteristic function on `quadrature_points`
/// equispaced nodes.
pub fn invert_charfn(params: &ModelParams, k_max: usize, quadrature_points: usize) -> Result<HeatDistribution> {
    let required = 4 * k_max;
    if quadrature_points < required || quadrature_points == 0 {
        return Err(Error::TooFewQuadraturePoints {
            required: required.max(1),
            given: quadrature_points,
        });
    }
    let l = quadrature_points;
    let thetas: Vec<f64> = (0..l).map(|j| 2.0 * PI * j as f64 / l as f64).collect();
    let samples = charfn_on_real_grid(params, &thetas);
    // e^{−2πi r/L} for r = 0..L; the exponent j·k is reduced mod L
    let twiddle: Vec<Complex64> = thetas.iter().map(|&t| Complex64::new(t.cos(), -t.sin())).collect();

    let k_lo = -(k_max as i64);
    let raw: Vec<Complex64> = (0..=2 * k_max)
        .into_par_iter()
        .map(|i| {
            let k = k_lo + i as i64;
            let shift = k.rem_euclid(l as i64) as usize;
            let mut acc = ComplexNeumaierSum::new();
            let mut idx = 0usize;
            for g in &samples {
                acc.add(g * twiddle[idx]);
                idx += shift;
                if idx >= l {
                    idx -= l;
                }
            }
            acc.value() / l as f64
        })
        .collect();

    let mut masses = Vec::with_capacity(raw.len());
    let mut rounding = 0.0;
    for (i, p) in raw.iter().enumerate() {
        let k = k_lo + i as i64;
        if p.im.abs() > IMAGINARY_TOLERANCE {
            return Err(Error::ImaginaryResidue { k, residue: p.im });
        }
        let mut value = p.re;
        if value < 0.0 && value > -NEGATIVE_ROUNDING {
            rounding += -value;
            value = 0.0;
        }
        masses.push(value);
    }
    let edge = masses[0].max(masses[masses.len() - 1]);
    if edge > ALIASING_TOLERANCE {
        return Err(Error::AliasingDetected {
            k_max,
            mass: edge,
            tolerance: ALIASING_TOLERANCE,
        });
    }
    let error = lattice_tail_bound(params, k_max) + rounding;
    Ok(HeatDistribution::new(
        masses,
        Horizon::from_tau(params.tau()),
        error,
        Provenance::CharfnInversion,
    )
    .with_hbar_omega(params.hbar_omega()))
}

/// Heat law at `params`: unit mass at `τ = 0`, the closed form at `τ = ∞`,
/// inversion of the characteristic function otherwise.
pub fn heat_distribution(params: &ModelParams, k_max: Option<usize>) -> Result<HeatDistribution> {
    let k_max = k_max.unwrap_or_else(|| default_k_max(params));
    if params.tau() == 0.0 {
        return Ok(HeatDistribution::delta(k_max).with_hbar_omega(params.hbar_omega()));
    }
    if params.is_stationary() {
        return Ok(asymptotic_distribution(params, k_max));
    }
    invert_charfn(params, k_max, default_quadrature_points(k_max))
}

/// `Σ_k P_k e^{iθk}` for dimensionless `θ = μħω`.
pub fn forward_transform(dist: &HeatDistribution, theta: f64) -> Complex64 {
    let mut acc = ComplexNeumaierSum::new();
    for (k, _, p) in dist.points() {
        acc.add(Complex64::from_polar(p, theta * k as f64));
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::charfn::charfn;

    fn params(b1: f64, b2: f64, tau: f64) -> ModelParams {
        ModelParams::new(b1, b2, tau).unwrap()
    }

    #[test]
    fn default_window() {
        assert_eq!(default_k_max(&params(1.0, 3.0, 1.0)), 33);
        assert_eq!(default_k_max(&params(10.0, 20.0, 1.0)), 8);
        assert_eq!(default_quadrature_points(33), 132);
    }

    #[test]
    fn zero_time_is_a_delta() {
        let d = invert_charfn(&params(1.0, 3.0, 0.0), 20, 80).unwrap();
        assert!((d.mass(0) - 1.0).abs() < 1e-14);
        for k in 1..=20 {
            assert!(d.mass(k).abs() < 1e-12 && d.mass(-k).abs() < 1e-12);
        }
    }

    #[test]
    fn normalised_and_consistent_with_forward_transform() {
        let p = params(1.0, 3.0, 0.1);
        let d = invert_charfn(&p, 40, 160).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-10 + d.truncation_error());
        for theta in [0.3, 1.1, 2.9] {
            let g = charfn(&p, Complex64::new(theta, 0.0)).unwrap().value;
            assert!((forward_transform(&d, theta) - g).norm() < 1e-12);
        }
    }

    #[test]
    fn refuses_short_quadrature_and_narrow_windows() {
        let p = params(1.0, 3.0, 1.0);
        assert!(matches!(
            invert_charfn(&p, 40, 100),
            Err(Error::TooFewQuadraturePoints { .. })
        ));
        assert!(matches!(invert_charfn(&p, 5, 64), Err(Error::AliasingDetected { .. })));
    }

    #[test]
    fn tail_bound_covers_window_loss() {
        let p = params(1.0, 3.0, 2.0);
        let wide = invert_charfn(&p, 60, 240).unwrap();
        let narrow_bound = lattice_tail_bound(&p, 20);
        let outside: f64 = (21..=60).map(|k| wide.mass(k) + wide.mass(-k)).sum();
        assert!(outside <= narrow_bound);
        assert!(outside > 0.1 * narrow_bound);
    }
}
