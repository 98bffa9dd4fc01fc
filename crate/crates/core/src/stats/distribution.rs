use serde::Serialize;

use crate::summation::NeumaierSum;

/// Contact time a distribution refers to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Horizon {
    Finite(f64),
    Asymptotic,
}

impl Horizon {
    pub fn from_tau(tau: f64) -> Self {
        if tau == f64::INFINITY {
            Horizon::Asymptotic
        } else {
            Horizon::Finite(tau)
        }
    }
}

/// Which construction produced the masses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    CharfnInversion,
    Asymptotic,
    Isothermal,
    LowTemperature,
    BruteForce,
}

/// Probability masses on the heat lattice `Q = k ħω`, `−K ≤ k ≤ K`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatDistribution {
    hbar_omega: f64,
    k_max: usize,
    masses: Vec<f64>,
    horizon: Horizon,
    /// Bound on the mass lying outside `[−K, K]` plus any other certified
    /// construction error in the total.
    truncation_error: f64,
    provenance: Provenance,
    /// Free-form regime annotation (e.g. validity of a limiting law).
    note: Option<String>,
}

impl HeatDistribution {
    /// `masses[i]` is the mass at `k = i − K`; its length must be `2K + 1`.
    pub fn new(masses: Vec<f64>, horizon: Horizon, truncation_error: f64, provenance: Provenance) -> Self {
        assert!(masses.len() % 2 == 1, "mass vector must be centred on k = 0");
        HeatDistribution {
            hbar_omega: 1.0,
            k_max: masses.len() / 2,
            masses,
            horizon,
            truncation_error,
            provenance,
            note: None,
        }
    }

    pub fn with_hbar_omega(mut self, hbar_omega: f64) -> Self {
        self.hbar_omega = hbar_omega;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Single unit mass at `Q = 0` (no contact time).
    pub fn delta(k_max: usize) -> Self {
        let mut masses = vec![0.0; 2 * k_max + 1];
        masses[k_max] = 1.0;
        HeatDistribution::new(masses, Horizon::Finite(0.0), 0.0, Provenance::CharfnInversion)
    }

    pub fn hbar_omega(&self) -> f64 {
        self.hbar_omega
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn horizon(&self) -> Horizon {
        self.horizon
    }

    pub fn truncation_error(&self) -> f64 {
        self.truncation_error
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn note(&self) -> Option<&str> {
        self.note.as_deref()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Mass at lattice index `k`; zero outside the stored window.
    pub fn mass(&self, k: i64) -> f64 {
        let idx = k + self.k_max as i64;
        if idx < 0 || idx as usize >= self.masses.len() {
            0.0
        } else {
            self.masses[idx as usize]
        }
    }

    /// `(k, Q, P)` triples in ascending `k`.
    pub fn points(&self) -> impl Iterator<Item = (i64, f64, f64)> + '_ {
        let k_max = self.k_max as i64;
        self.masses.iter().enumerate().map(move |(i, &p)| {
            let k = i as i64 - k_max;
            (k, k as f64 * self.hbar_omega, p)
        })
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().copied().collect::<NeumaierSum>().value()
    }

    /// Raw moment `Σ Q^r P(Q)` in units of `(ħω)^r`, times `ħω^r`.
    pub fn moment(&self, order: i32) -> f64 {
        self.points()
            .map(|(k, _, p)| (k as f64).powi(order) * p)
            .collect::<NeumaierSum>()
            .value()
            * self.hbar_omega.powi(order)
    }

    /// `Σ_{k>0} k (P_k − P_{−k}) ħω`; exactly zero for a symmetric law.
    pub fn mean(&self) -> f64 {
        (1..=self.k_max as i64)
            .map(|k| k as f64 * (self.mass(k) - self.mass(-k)))
            .collect::<NeumaierSum>()
            .value()
            * self.hbar_omega
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.points()
            .map(|(_, q, p)| (q - mean).powi(2) * p)
            .collect::<NeumaierSum>()
            .value()
    }

    /// Total-variation distance `½ Σ |P − P'|` over the union of windows.
    pub fn total_variation(&self, other: &HeatDistribution) -> f64 {
        let k = self.k_max.max(other.k_max) as i64;
        0.5 * (-k..=k)
            .map(|k| (self.mass(k) - other.mass(k)).abs())
            .collect::<NeumaierSum>()
            .value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_of_a_three_point_law() {
        let d = HeatDistribution::new(vec![0.25, 0.5, 0.25], Horizon::Asymptotic, 0.0, Provenance::Asymptotic)
            .with_hbar_omega(2.0);
        assert_eq!(d.total(), 1.0);
        assert_eq!(d.mean(), 0.0);
        assert_eq!(d.variance(), 2.0);
        assert_eq!(d.mass(-1), 0.25);
        assert_eq!(d.mass(5), 0.0);
        let qs: Vec<f64> = d.points().map(|(_, q, _)| q).collect();
        assert_eq!(qs, vec![-2.0, 0.0, 2.0]);
    }

    #[test]
    fn total_variation_across_windows() {
        let a = HeatDistribution::delta(0);
        let b = HeatDistribution::new(vec![0.0, 0.5, 0.5], Horizon::Asymptotic, 0.0, Provenance::Asymptotic);
        assert_eq!(a.total_variation(&b), 0.5);
        assert_eq!(b.total_variation(&a), 0.5);
    }
}
