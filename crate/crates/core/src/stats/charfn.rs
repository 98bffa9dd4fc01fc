//! Characteristic function `G(μ, τ) = Σ_Q P(Q, τ) e^{iμQ}` of the heat.
//!
//! With `E = e^{iμħω}` and `q = e^{−β₁ħω}` the resummed double sum reads
//!
//! ```text
//! G = (1 − q) E / ((E − q) + (1 − E)(uE − vq))
//! ```
//!
//! which is the usual closed form divided through by `e^{β₁ħω}`. Written this
//! way it cannot overflow for large `β₁` and gives `G(0) = 1` exactly.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{relaxation_pair, ModelParams, RelaxationPair, TransitionMatrix};
use crate::summation::ComplexNeumaierSum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharFnSample {
    pub mu: Complex64,
    pub value: Complex64,
    pub tau: f64,
}

/// `e^{iθ}` and `e^{iθ} − 1` for complex `θ`, the latter without
/// cancellation for small `θ`.
fn phase(theta: Complex64) -> (Complex64, Complex64) {
    let (a, b) = (theta.re, theta.im);
    let radius = (-b).exp();
    let (sin, cos) = a.sin_cos();
    let half = (0.5 * a).sin();
    let e = Complex64::new(radius * cos, radius * sin);
    let e_minus_one = Complex64::new((-b).exp_m1() * cos - 2.0 * half * half, radius * sin);
    (e, e_minus_one)
}

/// Open interval of `Im θ` (`θ = μħω`) on which the Fourier series of the
/// heat law converges: the annulus between the two poles of `G` in `E`.
pub fn convergence_strip(params: &ModelParams) -> (f64, f64) {
    strip_for(&relaxation_pair(params), (-params.beta1()).exp())
}

fn strip_for(pair: &RelaxationPair, q: f64) -> (f64, f64) {
    let u = pair.u;
    let b = 1.0 + u + pair.v * q;
    let c = q * pair.one_plus_v();
    let (inner, outer) = if u == 0.0 {
        (c / b, f64::INFINITY)
    } else {
        let s = (b * b - 4.0 * u * c).max(0.0).sqrt();
        (2.0 * c / (b + s), (b + s) / (2.0 * u))
    };
    // |E| = e^{−Im θ}
    (-outer.ln(), -inner.ln())
}

struct Evaluator {
    pair: RelaxationPair,
    q: f64,
    strip: (f64, f64),
    hbar_omega: f64,
}

impl Evaluator {
    fn new(params: &ModelParams) -> Self {
        let pair = relaxation_pair(params);
        let q = (-params.beta1()).exp();
        Evaluator {
            strip: strip_for(&pair, q),
            pair,
            q,
            hbar_omega: params.hbar_omega(),
        }
    }

    fn check(&self, theta: Complex64) -> Result<()> {
        let (lo, hi) = self.strip;
        if theta.im > lo && theta.im < hi {
            Ok(())
        } else {
            Err(Error::DomainError {
                re: theta.re / self.hbar_omega,
                im: theta.im / self.hbar_omega,
                lo: lo / self.hbar_omega,
                hi: hi / self.hbar_omega,
            })
        }
    }

    fn denominator(&self, e: Complex64, e_minus_one: Complex64) -> Complex64 {
        let (u, v, q) = (self.pair.u, self.pair.v, self.q);
        (e - q) - e_minus_one * (e * u - v * q)
    }

    fn value(&self, theta: Complex64) -> Complex64 {
        let (e, e_minus_one) = phase(theta);
        e * (1.0 - self.q) / self.denominator(e, e_minus_one)
    }

    /// `G − 1 = (1 − E)(q(1+v) − uE) / D`, accurate when `G ≈ 1`.
    fn value_minus_one(&self, theta: Complex64) -> Complex64 {
        let (e, e_minus_one) = phase(theta);
        let numerator = -e_minus_one * (self.q * self.pair.one_plus_v() - e * self.pair.u);
        numerator / self.denominator(e, e_minus_one)
    }
}

/// Closed-form `G(μ, τ)`; `μ` is conjugate to `Q` in energy units.
pub fn charfn(params: &ModelParams, mu: Complex64) -> Result<CharFnSample> {
    let ev = Evaluator::new(params);
    let theta = mu * params.hbar_omega();
    ev.check(theta)?;
    Ok(CharFnSample {
        mu,
        value: ev.value(theta),
        tau: params.tau(),
    })
}

/// `G` on a batch of real `θ = μħω` values, skipping the domain check.
pub(crate) fn charfn_on_real_grid(params: &ModelParams, thetas: &[f64]) -> Vec<Complex64> {
    let ev = Evaluator::new(params);
    thetas.iter().map(|&t| ev.value(Complex64::new(t, 0.0))).collect()
}

/// `G(θ) − 1` for real dimensionless `θ = μħω`.
pub(crate) fn charfn_minus_one(params: &ModelParams, theta: f64) -> Complex64 {
    Evaluator::new(params).value_minus_one(Complex64::new(theta, 0.0))
}

/// Argument `−iΔβ − μ` at which `G` takes the same value as at `μ`, with
/// `Δβ = β₂ − β₁` in inverse energy units.
///
/// This is the characteristic-function form of `P(Q)/P(−Q) = e^{−ΔβQ}`.
pub fn symmetry_partner(params: &ModelParams, mu: Complex64) -> Complex64 {
    let delta_beta = params.delta_beta() / params.hbar_omega();
    Complex64::new(0.0, -delta_beta) - mu
}

/// Stationary characteristic function written directly as the product of
/// the two thermal factors:
/// `(1 − q₁ − q₂ + q₁q₂) / (1 − q₂E − q₁/E + q₁q₂)`.
pub fn asymptotic_charfn(params: &ModelParams, mu: Complex64) -> Complex64 {
    let q1 = (-params.beta1()).exp();
    let q2 = (-params.beta2()).exp();
    let (e, _) = phase(mu * params.hbar_omega());
    (1.0 - q1 - q2 + q1 * q2) / (1.0 - q2 * e - q1 / e + q1 * q2)
}

/// `(cosh βħω − 1) / (cosh βħω − cos μħω)` for equal temperatures.
pub fn isothermal_charfn(beta: f64, theta: f64) -> f64 {
    (beta.cosh() - 1.0) / (beta.cosh() - theta.cos())
}

/// `G` by direct summation of `Σ_{n,m ≤ N} P⁰_n X_{m,n} e^{iμħω(m−n)}` over
/// a truncated transition matrix. Deviates from [`charfn`] by at most the
/// matrix leakage.
pub fn charfn_from_matrix(tm: &TransitionMatrix, params: &ModelParams, mu: Complex64) -> CharFnSample {
    let q = (-params.beta1()).exp();
    let theta = mu * params.hbar_omega();
    let mut acc = ComplexNeumaierSum::new();
    let mut weight = 1.0 - q;
    for n in 0..=tm.n_max() {
        for m in 0..=tm.n_max() {
            let phase = (Complex64::i() * theta * (m as f64 - n as f64)).exp();
            acc.add(phase * (weight * tm.get(m, n)));
        }
        weight *= q;
    }
    CharFnSample {
        mu,
        value: acc.value(),
        tau: params.tau(),
    }
}
