//! Independent ground truth: the population sector of the thermal damping
//! master equation integrated on a truncated Fock space.
//!
//! Nothing here touches the transition kernel or the characteristic
//! function. Populations obey the birth–death equation
//!
//! ```text
//! dp_m/dτ = (m+1)(n̄+1) p_{m+1} + m n̄ p_{m−1} − [m(n̄+1) + (m+1)n̄] p_m
//! ```
//!
//! with an absorbing boundary above `N`: the upward flux `(N+1)n̄ p_N` is
//! removed and booked as leakage.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{thermal_occupation, ModelParams};
use crate::stats::{HeatDistribution, Horizon, Provenance};
use crate::summation::NeumaierSum;

/// Largest step, in units of `1 / ((n̄+1) N)`.
pub const STEP_SCALE: f64 = 1e-3;
/// Half-step disagreement that rejects a step size.
pub const HALF_STEP_TOLERANCE: f64 = 1e-9;
/// Boundary leakage above which the Fock padding is doubled.
pub const LEAKAGE_TARGET: f64 = 1e-8;
pub const DEFAULT_PADDING: usize = 24;
const MAX_PADDING: usize = 768;

/// Tridiagonal rate matrix of the population dynamics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BirthDeathGenerator {
    nbar: f64,
    n_max: usize,
    /// coefficient of `p_m` in `dp_m/dτ`
    diag: Vec<f64>,
    /// coefficient of `p_{m−1}`
    from_below: Vec<f64>,
    /// coefficient of `p_{m+1}`
    from_above: Vec<f64>,
}

pub fn birth_death_generator(nbar2: f64, n_max: usize) -> BirthDeathGenerator {
    assert!(n_max >= 1, "need at least two Fock levels");
    let levels = 0..=n_max;
    BirthDeathGenerator {
        nbar: nbar2,
        n_max,
        diag: levels
            .clone()
            .map(|m| -(m as f64 * (nbar2 + 1.0) + (m as f64 + 1.0) * nbar2))
            .collect(),
        from_below: levels.clone().map(|m| m as f64 * nbar2).collect(),
        from_above: levels
            .map(|m| {
                if m < n_max {
                    (m as f64 + 1.0) * (nbar2 + 1.0)
                } else {
                    0.0
                }
            })
            .collect(),
    }
}

impl BirthDeathGenerator {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    /// `out = A p`.
    pub fn apply(&self, p: &[f64], out: &mut [f64]) {
        let n = self.n_max;
        for m in 0..=n {
            let mut rate = self.diag[m] * p[m];
            if m > 0 {
                rate += self.from_below[m] * p[m - 1];
            }
            if m < n {
                rate += self.from_above[m] * p[m + 1];
            }
            out[m] = rate;
        }
    }

    /// Probability flux through the absorbing boundary.
    pub fn leak_rate(&self, p: &[f64]) -> f64 {
        (self.n_max as f64 + 1.0) * self.nbar * p[self.n_max]
    }

    /// Bose–Einstein law at `n̄`, cut at `N` (not renormalised).
    pub fn stationary(&self) -> Vec<f64> {
        let ratio = self.nbar / (1.0 + self.nbar);
        (0..=self.n_max)
            .map(|m| ratio.powi(m as i32) / (1.0 + self.nbar))
            .collect()
    }

    /// Default step bound `10⁻³ / ((n̄+1) N)`.
    pub fn max_step(&self) -> f64 {
        STEP_SCALE / ((self.nbar + 1.0) * self.n_max as f64)
    }

    fn rk4_step(&self, p: &[f64], h: f64) -> Vec<f64> {
        let dim = self.dim();
        let mut k1 = vec![0.0; dim];
        let mut k2 = vec![0.0; dim];
        let mut k3 = vec![0.0; dim];
        let mut k4 = vec![0.0; dim];
        let mut tmp = vec![0.0; dim];
        self.apply(p, &mut k1);
        for i in 0..dim {
            tmp[i] = p[i] + 0.5 * h * k1[i];
        }
        self.apply(&tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = p[i] + 0.5 * h * k2[i];
        }
        self.apply(&tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = p[i] + h * k3[i];
        }
        self.apply(&tmp, &mut k4);
        (0..dim)
            .map(|i| p[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect()
    }
}

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
struct Dense {
    dim: usize,
    data: Vec<f64>,
}

impl Dense {
    fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Dense { dim, data }
    }

    fn mul(&self, other: &Dense) -> Dense {
        let dim = self.dim;
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let a = self.data[i * dim + k];
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[k * dim..(k + 1) * dim];
                for (out, b) in data[i * dim..(i + 1) * dim].iter_mut().zip(row) {
                    *out += a * b;
                }
            }
        }
        Dense { dim, data }
    }

    fn pow(&self, mut k: u64) -> Dense {
        let mut acc = Dense::identity(self.dim);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn apply(&self, p: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(p)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

/// Time-`τ` map of `steps` identical RK4 steps.
///
/// A single RK4 step is linear in the state, so its matrix is assembled by
/// stepping each unit vector; the `steps`-fold product is then formed by
/// repeated squaring.
fn rk4_propagator(generator: &BirthDeathGenerator, step: f64, steps: u64) -> Dense {
    let dim = generator.dim();
    let mut one_step = Dense {
        dim,
        data: vec![0.0; dim * dim],
    };
    let mut unit = vec![0.0; dim];
    for j in 0..dim {
        unit[j] = 1.0;
        let column = generator.rk4_step(&unit, step);
        for (i, x) in column.into_iter().enumerate() {
            one_step.data[i * dim + j] = x;
        }
        unit[j] = 0.0;
    }
    one_step.pow(steps)
}

/// Fock populations at a given time, with the mass lost through the
/// boundary so far.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PopulationState {
    pub p: Vec<f64>,
    pub tau: f64,
    pub leakage: f64,
}

impl PopulationState {
    pub fn fock(level: usize, n_max: usize) -> Self {
        let mut p = vec![0.0; n_max + 1];
        p[level] = 1.0;
        PopulationState {
            p,
            tau: 0.0,
            leakage: 0.0,
        }
    }

    pub fn from_populations(p: Vec<f64>) -> Self {
        PopulationState {
            p,
            tau: 0.0,
            leakage: 0.0,
        }
    }

    pub fn total(&self) -> f64 {
        self.p.iter().copied().collect::<NeumaierSum>().value()
    }

    pub fn mean_level(&self) -> f64 {
        self.p
            .iter()
            .enumerate()
            .map(|(m, p)| m as f64 * p)
            .collect::<NeumaierSum>()
            .value()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepControl {
    /// Overrides the default step bound when set.
    pub max_step: Option<f64>,
    /// Repeat at half the step and compare.
    pub certify: bool,
    pub tolerance: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            max_step: None,
            certify: true,
            tolerance: HALF_STEP_TOLERANCE,
        }
    }
}

fn step_plan(generator: &BirthDeathGenerator, tau: f64, control: &StepControl) -> Result<(f64, u64)> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::InvalidParams {
            name: "tau",
            value: tau,
            reason: "oracle integrates finite non-negative times only",
        });
    }
    let bound = control.max_step.unwrap_or_else(|| generator.max_step());
    let steps = (tau / bound).ceil().max(1.0) as u64;
    Ok((tau / steps as f64, steps))
}

/// Propagator over `tau`, checked against the same integration at half the
/// step when `control.certify` is set.
fn certified_propagator(generator: &BirthDeathGenerator, tau: f64, control: &StepControl) -> Result<Dense> {
    let (step, steps) = step_plan(generator, tau, control)?;
    let coarse = rk4_propagator(generator, step, steps);
    if control.certify {
        let fine = rk4_propagator(generator, 0.5 * step, 2 * steps);
        let difference = coarse
            .data
            .iter()
            .zip(&fine.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if difference > control.tolerance {
            return Err(Error::StepRejected {
                difference,
                tolerance: control.tolerance,
            });
        }
        return Ok(fine);
    }
    Ok(coarse)
}

/// Integrates `initial` forward by `tau`.
pub fn evolve(
    generator: &BirthDeathGenerator,
    initial: &PopulationState,
    tau: f64,
    control: &StepControl,
) -> Result<PopulationState> {
    assert_eq!(initial.p.len(), generator.dim(), "state and generator sizes differ");
    if tau == 0.0 {
        return Ok(initial.clone());
    }
    let propagator = certified_propagator(generator, tau, control)?;
    let p = propagator.apply(&initial.p);
    // the generator conserves mass except through the boundary
    let lost = initial.total() - p.iter().copied().collect::<NeumaierSum>().value();
    Ok(PopulationState {
        p,
        tau: initial.tau + tau,
        leakage: initial.leakage + lost.max(0.0),
    })
}

/// Kullback–Leibler divergence `Σ p ln(p/π)`; non-increasing in time for
/// any Markov evolution with stationary law `π`.
pub fn relative_entropy(p: &[f64], stationary: &[f64]) -> f64 {
    p.iter()
        .zip(stationary)
        .filter(|(p, _)| **p > 0.0)
        .map(|(p, s)| p * (p / s).ln())
        .collect::<NeumaierSum>()
        .value()
}

/// Oracle transition probabilities for initial levels `0..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleMatrix {
    pub n_max: usize,
    /// Fock levels simulated beyond `n_max`.
    pub padding: usize,
    pub tau: f64,
    /// `entries[m * (n_max + 1) + n]` for `m, n ≤ n_max`.
    entries: Vec<f64>,
    /// Populations of levels above `n_max` kept for heat binning,
    /// `overflow[(m − n_max − 1) * (n_max + 1) + n]`.
    overflow: Vec<f64>,
    /// Boundary loss per column.
    pub leakage: Vec<f64>,
}

impl OracleMatrix {
    pub fn get(&self, m: usize, n: usize) -> f64 {
        let cols = self.n_max + 1;
        if m <= self.n_max {
            self.entries[m * cols + n]
        } else {
            self.overflow[(m - self.n_max - 1) * cols + n]
        }
    }

    /// Highest simulated level.
    pub fn top_level(&self) -> usize {
        self.n_max + self.padding
    }

    pub fn max_leakage(&self) -> f64 {
        self.leakage.iter().copied().fold(0.0, f64::max)
    }
}

/// Integrates every Fock column `n ≤ n_max` over `tau` at bath
/// temperature `beta2`, doubling the padding until the boundary loss of
/// each column is below [`LEAKAGE_TARGET`].
pub fn oracle_transition_matrix(beta2: f64, tau: f64, n_max: usize, control: &StepControl) -> Result<OracleMatrix> {
    let nbar = thermal_occupation(beta2);
    let cols = n_max + 1;
    let mut padding = DEFAULT_PADDING;
    loop {
        let top = n_max + padding;
        let generator = birth_death_generator(nbar, top);
        let propagator = if tau == 0.0 {
            Dense::identity(generator.dim())
        } else {
            certified_propagator(&generator, tau, control)?
        };
        let dim = generator.dim();
        let leakage: Vec<f64> = (0..cols)
            .map(|n| {
                let kept: NeumaierSum = (0..dim).map(|m| propagator.data[m * dim + n]).collect();
                (1.0 - kept.value()).max(0.0)
            })
            .collect();
        let worst = leakage.iter().copied().fold(0.0, f64::max);
        if worst < LEAKAGE_TARGET || padding >= MAX_PADDING {
            let mut entries = Vec::with_capacity(cols * cols);
            let mut overflow = Vec::with_capacity(padding * cols);
            for m in 0..dim {
                let row = &propagator.data[m * dim..m * dim + cols];
                if m < cols {
                    entries.extend_from_slice(row);
                } else {
                    overflow.extend_from_slice(row);
                }
            }
            return Ok(OracleMatrix {
                n_max,
                padding,
                tau,
                entries,
                overflow,
                leakage,
            });
        }
        padding *= 2;
    }
}

/// Heat law assembled from first principles: thermal weights `P⁰_n` at
/// `β₁`, oracle transition probabilities, binned at `k = m − n`.
pub fn heat_distribution_bruteforce(params: &ModelParams, n_max: usize) -> Result<HeatDistribution> {
    heat_distribution_bruteforce_with(params, n_max, &StepControl::default())
}

pub fn heat_distribution_bruteforce_with(
    params: &ModelParams,
    n_max: usize,
    control: &StepControl,
) -> Result<HeatDistribution> {
    let oracle = oracle_transition_matrix(params.beta2(), params.tau(), n_max, control)?;
    let q = (-params.beta1()).exp();
    let top = oracle.top_level();
    let k_max = top;
    let mut bins: Vec<NeumaierSum> = (0..2 * k_max + 1).map(|_| NeumaierSum::new()).collect();
    let mut weight = -(-params.beta1()).exp_m1();
    let mut leaked = NeumaierSum::new();
    for n in 0..=n_max {
        for m in 0..=top {
            let k = m as i64 - n as i64;
            bins[(k + k_max as i64) as usize].add(weight * oracle.get(m, n));
        }
        leaked.add(weight * oracle.leakage[n]);
        weight *= q;
    }
    let initial_tail = (-params.beta1() * (n_max as f64 + 1.0)).exp();
    let masses = bins.into_iter().map(|b| b.value()).collect();
    Ok(HeatDistribution::new(
        masses,
        Horizon::Finite(params.tau()),
        initial_tail + leaked.value(),
        Provenance::BruteForce,
    )
    .with_hbar_omega(params.hbar_omega()))
}
