use serde::Serialize;

use super::params::{thermal_occupation, ModelParams};

/// The relaxation parameters `u = n̄₂(1 − e^{−τ})` and
/// `v = n̄₂ − (n̄₂ + 1)e^{−τ}`.
///
/// `1 + v` and `u − v = e^{−τ}` are kept separately because forming them
/// from `u` and `v` loses digits near `τ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelaxationPair {
    pub u: f64,
    pub v: f64,
    one_plus_v: f64,
    decay: f64,
    nbar2: f64,
    beta2: f64,
    tau: f64,
}

pub fn relaxation_pair(params: &ModelParams) -> RelaxationPair {
    RelaxationPair::new(params.beta2(), params.tau())
}

impl RelaxationPair {
    pub fn new(beta2: f64, tau: f64) -> Self {
        let nbar2 = thermal_occupation(beta2);
        let decay = (-tau).exp();
        let growth = -(-tau).exp_m1();
        RelaxationPair {
            u: nbar2 * growth,
            v: nbar2 * growth - decay,
            one_plus_v: (nbar2 + 1.0) * growth,
            decay,
            nbar2,
            beta2,
            tau,
        }
    }

    pub fn one_plus_v(&self) -> f64 {
        self.one_plus_v
    }

    /// `e^{−τ}`, equal to `u − v`.
    pub fn decay(&self) -> f64 {
        self.decay
    }

    pub fn nbar2(&self) -> f64 {
        self.nbar2
    }

    pub fn beta2(&self) -> f64 {
        self.beta2
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Argument of the hypergeometric representation,
    /// `y = (u − v) / (u(1 + v))`. Infinite at `τ = 0`.
    pub fn y(&self) -> f64 {
        self.decay / (self.u * self.one_plus_v)
    }
}
