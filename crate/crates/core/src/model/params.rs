use serde::Serialize;

use crate::error::{Error, Result};

/// Physical configuration of the oscillator–bath pair.
///
/// Inverse temperatures are stored as the dimensionless products `β ħω`,
/// and `tau` is the dimensionless contact time `γ t`. `hbar_omega` only
/// rescales reported energies. `tau = +inf` selects the stationary limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    beta1: f64,
    beta2: f64,
    hbar_omega: f64,
    tau: f64,
}

impl ModelParams {
    pub fn new(beta1: f64, beta2: f64, tau: f64) -> Result<Self> {
        check_beta("beta1", beta1)?;
        check_beta("beta2", beta2)?;
        if tau.is_nan() || tau < 0.0 {
            return Err(Error::InvalidParams {
                name: "tau",
                value: tau,
                reason: "must be >= 0",
            });
        }
        Ok(ModelParams {
            beta1,
            beta2,
            hbar_omega: 1.0,
            tau,
        })
    }

    pub fn with_hbar_omega(mut self, hbar_omega: f64) -> Result<Self> {
        if !(hbar_omega.is_finite() && hbar_omega > 0.0) {
            return Err(Error::InvalidParams {
                name: "hbar_omega",
                value: hbar_omega,
                reason: "must be finite and > 0",
            });
        }
        self.hbar_omega = hbar_omega;
        Ok(self)
    }

    /// Same configuration at another contact time.
    pub fn at_tau(self, tau: f64) -> Result<Self> {
        ModelParams::new(self.beta1, self.beta2, tau)?.with_hbar_omega(self.hbar_omega)
    }

    /// Oscillator and bath temperatures exchanged.
    pub fn swapped(self) -> Self {
        ModelParams {
            beta1: self.beta2,
            beta2: self.beta1,
            ..self
        }
    }

    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    pub fn beta2(&self) -> f64 {
        self.beta2
    }

    pub fn hbar_omega(&self) -> f64 {
        self.hbar_omega
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn is_stationary(&self) -> bool {
        self.tau == f64::INFINITY
    }

    /// `β₂ħω − β₁ħω`.
    pub fn delta_beta(&self) -> f64 {
        self.beta2 - self.beta1
    }

    pub fn nbar1(&self) -> f64 {
        thermal_occupation(self.beta1)
    }

    pub fn nbar2(&self) -> f64 {
        thermal_occupation(self.beta2)
    }
}

fn check_beta(name: &'static str, beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams {
            name,
            value: beta,
            reason: "must be finite and > 0",
        })
    }
}

/// Bose–Einstein occupation `1 / (e^{βħω} − 1)`.
pub fn thermal_occupation(beta: f64) -> f64 {
    1.0 / beta.exp_m1()
}

/// Mass of a thermal (geometric) law at `beta` above level `n`,
/// i.e. `Σ_{l > n} (1 − e^{−β}) e^{−βl} = e^{−β(n+1)}`.
pub fn thermal_tail(beta: f64, n: usize) -> f64 {
    (-beta * (n as f64 + 1.0)).exp()
}

/// Level `n = ⌈ln(1/ε)/β⌉`; the thermal tail above it, `e^{−β(n+1)}`, is
/// below `epsilon`.
pub fn thermal_cutoff(beta: f64, epsilon: f64) -> usize {
    ((1.0 / epsilon).ln() / beta).ceil().max(0.0) as usize
}
