//! Closed-form heat laws: the long-time limit, its isothermal special case,
//! the classical high-temperature density and the three-peak
//! low-temperature law.

use serde::Serialize;

use crate::model::ModelParams;
use crate::stats::distribution::{HeatDistribution, Horizon, Provenance};

/// `A = (1 − q₁)(1 − q₂)/(1 − q₁q₂)`, the stationary mass at `Q = 0`, with
/// `q = e^{−βħω}`.
pub fn asymptotic_prefactor(beta1: f64, beta2: f64) -> f64 {
    // −expm1 keeps 1 − q accurate at high temperature
    let a1 = -(-beta1).exp_m1();
    let a2 = -(-beta2).exp_m1();
    a1 * a2 / -(-(beta1 + beta2)).exp_m1()
}

/// `P(kħω) = A e^{−β₂ħω k}` for `k ≥ 0` and `A e^{β₁ħω k}` for `k < 0`;
/// the `k = 0` peak is counted once.
pub fn asymptotic_distribution(params: &ModelParams, k_max: usize) -> HeatDistribution {
    let (b1, b2) = (params.beta1(), params.beta2());
    let a = asymptotic_prefactor(b1, b2);
    let masses = (-(k_max as i64)..=k_max as i64)
        .map(|k| {
            let beta = if k >= 0 { b2 } else { b1 };
            a * (-beta * k.unsigned_abs() as f64).exp()
        })
        .collect();
    let kp1 = k_max as f64 + 1.0;
    let error = a * ((-b2 * kp1).exp() / -(-b2).exp_m1() + (-b1 * kp1).exp() / -(-b1).exp_m1());
    HeatDistribution::new(masses, Horizon::Asymptotic, error, Provenance::Asymptotic)
        .with_hbar_omega(params.hbar_omega())
}

/// Equal-temperature stationary law `P(kħω) = tanh(βħω/2) e^{−βħω|k|}`, in
/// units `ħω = 1`.
pub fn isothermal_distribution(beta: f64, k_max: usize) -> HeatDistribution {
    let p0 = (0.5 * beta).tanh();
    let masses = (-(k_max as i64)..=k_max as i64)
        .map(|k| p0 * (-beta * k.unsigned_abs() as f64).exp())
        .collect();
    let error = 2.0 * p0 * (-beta * (k_max as f64 + 1.0)).exp() / -(-beta).exp_m1();
    HeatDistribution::new(masses, Horizon::Asymptotic, error, Provenance::Isothermal)
}

/// Classical stationary heat density
/// `β₁β₂/(β₁+β₂) e^{−β₂Q}` for `Q ≥ 0` and `… e^{β₁Q}` for `Q < 0`,
/// with `β` in inverse energy units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalDensity {
    pub beta1: f64,
    pub beta2: f64,
}

pub fn classical_distribution(params: &ModelParams) -> ClassicalDensity {
    ClassicalDensity {
        beta1: params.beta1() / params.hbar_omega(),
        beta2: params.beta2() / params.hbar_omega(),
    }
}

impl ClassicalDensity {
    pub fn density(&self, q: f64) -> f64 {
        let norm = self.beta1 * self.beta2 / (self.beta1 + self.beta2);
        if q >= 0.0 {
            norm * (-self.beta2 * q).exp()
        } else {
            norm * (self.beta1 * q).exp()
        }
    }

    /// `1/β₂ − 1/β₁`.
    pub fn mean(&self) -> f64 {
        1.0 / self.beta2 - 1.0 / self.beta1
    }

    /// `1/β₁² + 1/β₂²`.
    pub fn variance(&self) -> f64 {
        (self.beta1 * self.beta1).recip() + (self.beta2 * self.beta2).recip()
    }
}

/// Three-peak law on `k ∈ {−1, 0, 1}` with weights `∝ {e^{−β₁ħω}, 1,
/// e^{−β₂ħω}}`. Meant for `βħω ≫ 1`; the dropped peaks carry weight of
/// order `e^{−2 min(β₁, β₂)ħω}`, recorded in the note.
pub fn low_temperature_distribution(params: &ModelParams) -> HeatDistribution {
    let q1 = (-params.beta1()).exp();
    let q2 = (-params.beta2()).exp();
    let z = 1.0 + q1 + q2;
    let beta_min = params.beta1().min(params.beta2());
    let note = format!(
        "three-peak low-temperature law; neglected weight ~ e^(-2*{beta_min}) = {:e}",
        (-2.0 * beta_min).exp()
    );
    HeatDistribution::new(
        vec![q1 / z, 1.0 / z, q2 / z],
        Horizon::Asymptotic,
        0.0,
        Provenance::LowTemperature,
    )
    .with_hbar_omega(params.hbar_omega())
    .with_note(note)
}
