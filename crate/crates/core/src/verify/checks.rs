use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

use super::theorems::{check_fluctuation_theorem, check_symmetry};
use super::Outcome;
use crate::error::{Error, Result};
use crate::model::kernel::{transition_direct, transition_direct_extended, transition_hypergeometric};
use crate::model::{
    build_transition_matrix, thermal_occupation, KernelPolicy, ModelParams, RelaxationPair, TransitionMatrix,
};
use crate::oracle::{
    birth_death_generator, evolve, heat_distribution_bruteforce, oracle_transition_matrix, relative_entropy,
    PopulationState, StepControl,
};
use crate::stats::cumulants::FD_STEP;
use crate::stats::{
    asymptotic_charfn, asymptotic_distribution, asymptotic_prefactor, charfn, charfn_from_matrix,
    classical_distribution, cumulant_trace, fd_moments, forward_transform, heat_distribution, invert_charfn,
    isothermal_distribution, low_temperature_distribution, mean_heat, stationary_mean, stationary_variance,
    variance_heat, HeatDistribution, TauGrid,
};

const TAUS: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];
const KERNEL_SIZE: usize = 40;
const PATH_SIZE: usize = 30;
const KERNEL_RUNTIME_BUDGET: f64 = 10.0;
const SYMMETRY_SEED: u64 = 0x5eed_0007;
/// Masses below this are skipped in the finite-time fluctuation check:
/// inverted masses are accurate to ~1e−17 absolute, so the log-ratio error
/// of a pair grows like 1e−17 / min(P_k, P_−k).
pub(crate) const FT_MIN_MASS_INVERTED: f64 = 1e-8;

type CheckFn = fn(f64) -> Result<Outcome>;

const CHECKS: &[(&str, CheckFn)] = &[
    ("kernel_vs_oracle", kernel_vs_oracle),
    ("path_equivalence", path_equivalence),
    ("column_stochasticity", column_stochasticity),
    ("nonnegativity", nonnegativity),
    ("identity_at_zero_time", identity_at_zero_time),
    ("long_time_column_independence", long_time_column_independence),
    ("stationary_bose_einstein", stationary_bose_einstein),
    ("charfn_normalization", charfn_normalization),
    ("charfn_symmetry", charfn_symmetry),
    ("charfn_stationary_form", charfn_stationary_form),
    ("charfn_matrix_agreement", charfn_matrix_agreement),
    ("fourier_pair", fourier_pair),
    ("fluctuation_theorem_asymptotic", fluctuation_theorem_asymptotic),
    ("fluctuation_theorem_finite", fluctuation_theorem_finite),
    ("cumulants_vs_moments", cumulants_vs_moments),
    ("cumulants_vs_finite_differences", cumulants_vs_finite_differences),
    ("stationary_limits", stationary_limits),
    ("normalization", normalization),
    ("variance_monotone", variance_monotone),
    ("cumulant_envelope", cumulant_envelope),
    ("temperature_swap", temperature_swap),
    ("quantum_narrower_than_classical", quantum_narrower_than_classical),
    ("classical_limit", classical_limit),
    ("isothermal_peak", isothermal_peak),
    ("asymptotic_peak", asymptotic_peak),
    ("low_temperature_agreement", low_temperature_agreement),
    ("oracle_generator_stationary", oracle_generator_stationary),
    ("oracle_ground_state", oracle_ground_state),
    ("oracle_stationary", oracle_stationary),
    ("oracle_relaxation_rate", oracle_relaxation_rate),
    ("oracle_leakage", oracle_leakage),
    ("oracle_entropy_monotone", oracle_entropy_monotone),
    ("bruteforce_vs_inversion", bruteforce_vs_inversion),
    ("bruteforce_mean", bruteforce_mean),
    ("bruteforce_long_time", bruteforce_long_time),
];

#[cfg(test)]
pub(super) fn exists(name: &str) -> bool {
    CHECKS.iter().any(|(n, _)| *n == name)
}

pub(super) fn run(name: &str, tol: f64) -> Result<Outcome> {
    let (_, f) = CHECKS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownCheck(name.to_string()))?;
    f(tol)
}

fn params(b1: f64, b2: f64, tau: f64) -> Result<ModelParams> {
    ModelParams::new(b1, b2, tau)
}

fn tau_json(tau: f64) -> serde_json::Value {
    if tau.is_finite() {
        json!(tau)
    } else {
        json!("inf")
    }
}

fn max_abs_diff(a: &HeatDistribution, b: &HeatDistribution) -> f64 {
    let k = a.k_max().max(b.k_max()) as i64;
    (-k..=k).map(|k| (a.mass(k) - b.mass(k)).abs()).fold(0.0, f64::max)
}

// ---- transition kernel ----

fn kernel_vs_oracle(_tol: f64) -> Result<Outcome> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for tau in TAUS {
        let p = params(1.0, 3.0, tau)?;
        let closed = TransitionMatrix::with_size(&p, KERNEL_SIZE, &KernelPolicy::default())?;
        let oracle = oracle_transition_matrix(3.0, tau, KERNEL_SIZE, &StepControl::default())?;
        for n in 0..=KERNEL_SIZE {
            for m in 0..=KERNEL_SIZE {
                worst = worst.max((closed.get(m, n) - oracle.get(m, n)).abs());
            }
        }
    }
    let seconds = start.elapsed().as_secs_f64();
    Ok(Outcome::new(
        worst,
        json!({"beta1": 1.0, "beta2": 3.0, "tau": TAUS, "n_max": KERNEL_SIZE}),
    )
    .detail(format!("runtime {seconds:.3} s (budget {KERNEL_RUNTIME_BUDGET} s)"))
    .require(seconds < KERNEL_RUNTIME_BUDGET))
}

fn path_equivalence(_tol: f64) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut extended = 0usize;
    for tau in TAUS {
        let pair = RelaxationPair::new(3.0, tau);
        for m in 0..=PATH_SIZE {
            for n in 0..=PATH_SIZE {
                let direct = match transition_direct(m, n, &pair) {
                    Ok(c) => c.value,
                    Err(Error::ConditionLoss { .. }) => {
                        extended += 1;
                        transition_direct_extended(m, n, &pair)?.value
                    }
                    Err(e) => return Err(e.at(m, n)),
                };
                let hyper = transition_hypergeometric(m, n, &pair).map_err(|e| e.at(m, n))?;
                worst = worst.max((direct - hyper).abs());
            }
        }
    }
    Ok(
        Outcome::new(worst, json!({"beta2": 3.0, "tau": TAUS, "max_index": PATH_SIZE}))
            .detail(format!("{extended} direct-sum entries needed the double-double tier")),
    )
}

fn stochastic_matrices() -> Result<Vec<TransitionMatrix>> {
    TAUS.iter()
        .map(|&tau| TransitionMatrix::with_size(&params(1.0, 3.0, tau)?, KERNEL_SIZE, &KernelPolicy::default()))
        .collect()
}

fn column_stochasticity(_tol: f64) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut leak: f64 = 0.0;
    for tm in stochastic_matrices()? {
        for (n, deficit) in tm.column_deficits().into_iter().enumerate() {
            worst = worst.max(deficit.abs() - tm.column_leakage(n));
            leak = leak.max(tm.column_leakage(n));
        }
    }
    Ok(Outcome::new(
        worst.max(0.0),
        json!({"beta1": 1.0, "beta2": 3.0, "tau": TAUS, "n_max": KERNEL_SIZE}),
    )
    .detail(format!("largest certified column leakage {leak:e}")))
}

fn nonnegativity(_tol: f64) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for tm in stochastic_matrices()? {
        for c in tm.clamped() {
            worst = worst.max(-c.raw).max(c.raw - 1.0);
        }
    }
    Ok(Outcome::new(
        worst,
        json!({"beta1": 1.0, "beta2": 3.0, "tau": TAUS, "n_max": KERNEL_SIZE}),
    ))
}

fn identity_at_zero_time(_tol: f64) -> Result<Outcome> {
    let tm = TransitionMatrix::with_size(&params(1.0, 3.0, 0.0)?, KERNEL_SIZE, &KernelPolicy::default())?;
    let mut worst: f64 = 0.0;
    for n in 0..=KERNEL_SIZE {
        for m in 0..=KERNEL_SIZE {
            let expected = if m == n { 1.0 } else { 0.0 };
            worst = worst.max((tm.get(m, n) - expected).abs());
        }
    }
    Ok(Outcome::new(worst, json!({"beta1": 1.0, "beta2": 3.0, "tau": 0.0})))
}

fn long_time_column_independence(_tol: f64) -> Result<Outcome> {
    // deviation from the thermal column is ~ n e^{−τ}; 1e−8 holds for n ≤ 4
    let columns = 4;
    let p = params(1.0, 3.0, 20.0)?;
    let tm = TransitionMatrix::with_size(&p, KERNEL_SIZE, &KernelPolicy::default())?;
    let nbar = p.nbar2();
    let ratio = nbar / (1.0 + nbar);
    let mut worst: f64 = 0.0;
    for n in 0..=columns {
        for m in 0..=KERNEL_SIZE {
            worst = worst.max((tm.get(m, n) - ratio.powi(m as i32) / (1.0 + nbar)).abs());
        }
    }
    Ok(
        Outcome::new(worst, json!({"beta2": 3.0, "tau": 20.0, "columns": columns}))
            .detail("columns beyond n = 4 deviate by about n e^-20 > 1e-8"),
    )
}

fn stationary_bose_einstein(_tol: f64) -> Result<Outcome> {
    let p = params(1.0, 2.5, f64::INFINITY)?;
    let tm = TransitionMatrix::with_size(&p, KERNEL_SIZE, &KernelPolicy::default())?;
    let generator = birth_death_generator(thermal_occupation(2.5), KERNEL_SIZE);
    let law = generator.stationary();
    let mut worst: f64 = 0.0;
    for n in 0..=KERNEL_SIZE {
        for (m, expected) in law.iter().enumerate() {
            worst = worst.max((tm.get(m, n) - expected).abs());
        }
    }
    Ok(Outcome::new(worst, json!({"beta2": 2.5, "tau": "inf"})))
}

// ---- characteristic function ----

fn charfn_normalization(_tol: f64) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for tau in [0.0, 0.1, 1.0, 5.0, f64::INFINITY] {
        let p = params(1.0, 3.0, tau)?;
        worst = worst.max((charfn(&p, Complex64::new(0.0, 0.0))?.value - 1.0).norm());
        for i in 0..64 {
            let mu = -PI + 2.0 * PI * i as f64 / 64.0;
            worst = worst.max(charfn(&p, Complex64::new(mu, 0.0))?.value.norm() - 1.0);
        }
    }
    Ok(Outcome::new(
        worst,
        json!({"beta1": 1.0, "beta2": 3.0, "tau": [0.0, 0.1, 1.0, 5.0, "inf"]}),
    ))
}

fn charfn_symmetry(tol: f64) -> Result<Outcome> {
    let triples = [(1.0, 3.0, 0.7), (1.0, 2.5, 2.0), (2.5, 2.5, 1.3)];
    let mut rng = StdRng::seed_from_u64(SYMMETRY_SEED);
    let mut worst: f64 = 0.0;
    for (b1, b2, tau) in triples {
        let mus: Vec<f64> = (0..20).map(|_| rng.gen_range(-PI..PI)).collect();
        let report = check_symmetry(&params(b1, b2, tau)?, &mus, tol)?;
        worst = worst.max(report.max_residual).max(report.max_conjugation_residual);
    }
    Ok(
        Outcome::new(worst, json!({"triples": triples, "samples": 20, "seed": SYMMETRY_SEED}))
            .detail("symmetry argument -i*delta_beta - mu"),
    )
}

fn charfn_stationary_form(_tol: f64) -> Result<Outcome> {
    let p = params(1.0, 2.5, f64::INFINITY)?;
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let mu = Complex64::new(-PI + 0.31 * i as f64, 0.0);
        worst = worst.max((charfn(&p, mu)?.value - asymptotic_charfn(&p, mu)).norm());
    }
    Ok(Outcome::new(
        worst,
        json!({"beta1": 1.0, "beta2": 2.5, "tau": "inf", "samples": 20}),
    ))
}

fn charfn_matrix_agreement(_tol: f64) -> Result<Outcome> {
    let p = params(1.0, 3.0, 2.0)?;
    let tm = build_transition_matrix(&p, 1e-12)?;
    let mut worst: f64 = 0.0;
    for mu in [0.0, 0.3, 1.1, 2.9] {
        let mu = Complex64::new(mu, 0.0);
        let summed = charfn_from_matrix(&tm, &p, mu).value;
        worst = worst.max((summed - charfn(&p, mu)?.value).norm());
    }
    let p0 = params(1.0, 3.0, 0.0)?;
    let tm0 = build_transition_matrix(&p0, 1e-12)?;
    let at_zero = charfn_from_matrix(&tm0, &p0, Complex64::new(1.7, 0.0)).value;
    worst = worst.max((at_zero - 1.0).norm());
    Ok(Outcome::new(
        worst,
        json!({"beta1": 1.0, "beta2": 3.0, "tau": [2.0, 0.0], "mu": [0.0, 0.3, 1.1, 2.9]}),
    )
    .detail(format!(
        "matrix size {} with leakage {:e}",
        tm.n_max() + 1,
        tm.leakage()
    )))
}

fn fourier_pair(_tol: f64) -> Result<Outcome> {
    let p = params(1.0, 2.5, f64::INFINITY)?;
    let d = asymptotic_distribution(&p, 60);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let theta = -PI + 0.31 * i as f64;
        worst = worst.max((forward_transform(&d, theta) - asymptotic_charfn(&p, Complex64::new(theta, 0.0))).norm());
    }
    Ok(Outcome::new(
        worst,
        json!({"beta1": 1.0, "beta2": 2.5, "k_max": 60, "samples": 20}),
    ))
}

// ---- fluctuation theorem ----

fn fluctuation_theorem_asymptotic(tol: f64) -> Result<Outcome> {
    let p = params(1.0, 2.5, f64::INFINITY)?;
    let report = check_fluctuation_theorem(&asymptotic_distribution(&p, 40), p.delta_beta(), tol, 1e-300)?;
    let iso = check_fluctuation_theorem(&isothermal_distribution(2.5, 40), 0.0, tol, 1e-300)?;
    Ok(Outcome::new(
        report.max_residual.max(iso.max_residual),
        json!({"beta1": 1.0, "beta2": 2.5, "tau": "inf", "isothermal_beta": 2.5}),
    )
    .detail(format!("{} pairs", report.residuals.len())))
}

fn fluctuation_theorem_finite(tol: f64) -> Result<Outcome> {
    let p = params(1.0, 3.0, 0.7)?;
    let d = heat_distribution(&p, None)?;
    let report = check_fluctuation_theorem(&d, p.delta_beta(), tol, FT_MIN_MASS_INVERTED)?;
    Ok(
        Outcome::new(report.max_residual, json!({"beta1": 1.0, "beta2": 3.0, "tau": 0.7})).detail(format!(
            "{} pairs with both masses >= {FT_MIN_MASS_INVERTED:e}",
            report.residuals.len()
        )),
    )
}

// ---- cumulants ----

const CUMULANT_TAUS: [f64; 3] = [0.3, 1.0, 3.0];

fn cumulants_vs_moments(_tol: f64) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for tau in CUMULANT_TAUS {
        let p = params(1.0, 3.0, tau)?;
        let d = heat_distribution(&p, None)?;
        worst = worst.max((d.mean() - mean_heat(&p)).abs());
        worst = worst.max((d.variance() - variance_heat(&p)).abs());
    }
    Ok(Outcome::new(
        worst,
        json!({"beta1": 1.0, "beta2": 3.0, "tau": CUMULANT_TAUS}),
    ))
}

fn cumulants_vs_finite_differences(_tol: f64) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for tau in CUMULANT_TAUS {
        let p = params(1.0, 3.0, tau)?;
        let fd = fd_moments(&p, FD_STEP);
        worst = worst.max((fd.mean - mean_heat(&p)).abs());
        worst = worst.max((fd.variance - variance_heat(&p)).abs());
    }
    let trace = cumulant_trace(&params(1.0, 3.0, 0.0)?, &TauGrid::range(0.0, 8.0, 0.05)?)?;
    Ok(Outcome::new(
        worst,
        json!({"beta1": 1.0, "beta2": 3.0, "tau": CUMULANT_TAUS, "step": FD_STEP}),
    )
    .detail(format!("grid 0:8:0.05 relative residual {:e}", trace.max_fd_residual)))
}

fn stationary_limits(_tol: f64) -> Result<Outcome> {
    let p = params(1.0, 2.5, 20.0)?;
    let (mean_inf, var_inf) = (stationary_mean(&p), stationary_variance(&p));
    let d = heat_distribution(&p, None)?;
    let residual = [
        (mean_heat(&p) - mean_inf).abs(),
        (variance_heat(&p) - var_inf).abs(),
        (d.mean() - mean_inf).abs(),
        (d.variance() - var_inf).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let coth = |x: f64| 1.0 / x.tanh();
    let by_temperatures = 0.5 * (coth(1.25) - coth(0.5));
    Ok(Outcome::new(residual, json!({"beta1": 1.0, "beta2": 2.5, "tau": 20.0}))
        .detail(format!(
            "stationary mean {mean_inf:.7} (coth form {by_temperatures:.7}), variance {var_inf:.7}"
        ))
        .require((mean_inf - by_temperatures).abs() < 1e-14))
}

fn normalization(_tol: f64) -> Result<Outcome> {
    let mut laws = Vec::new();
    for tau in [0.0, 0.1, 0.7, 2.0, 20.0, f64::INFINITY] {
        laws.push(heat_distribution(&params(1.0, 3.0, tau)?, None)?);
        laws.push(heat_distribution(&params(1.0, 2.5, tau)?, None)?);
    }
    laws.push(invert_charfn(&params(0.3, 0.5, 1.0)?, 140, 560)?);
    laws.push(isothermal_distribution(2.5, 40));
    laws.push(low_temperature_distribution(&params(10.0, 10.0, f64::INFINITY)?));
    laws.push(heat_distribution_bruteforce(&params(1.0, 3.0, 1.0)?, 40)?);
    let worst = laws
        .iter()
        .map(|d| (d.total() - 1.0).abs() - d.truncation_error())
        .fold(0.0, f64::max);
    Ok(Outcome::new(worst, json!({"distributions": laws.len()})))
}

fn fig3_trace() -> Result<crate::stats::CumulantTrace> {
    cumulant_trace(&params(1.0, 3.0, 0.0)?, &TauGrid::range(0.0, 8.0, 0.05)?)
}

fn variance_monotone(_tol: f64) -> Result<Outcome> {
    let trace = fig3_trace()?;
    let worst = trace.variance.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max);
    Ok(Outcome::new(
        worst,
        json!({"beta1": 1.0, "beta2": 3.0, "grid": "0:8:0.05"}),
    ))
}

fn cumulant_envelope(_tol: f64) -> Result<Outcome> {
    let trace = fig3_trace()?;
    let worst = trace
        .tau_grid
        .iter()
        .zip(&trace.mean)
        .map(|(tau, m)| (m - trace.mean_inf).abs() - trace.envelope_constant * (-tau).exp())
        .fold(0.0, f64::max);
    Ok(
        Outcome::new(worst, json!({"beta1": 1.0, "beta2": 3.0, "grid": "0:8:0.05"}))
            .detail(format!("C = {:e}", trace.envelope_constant)),
    )
}

fn temperature_swap(_tol: f64) -> Result<Outcome> {
    let p = params(1.0, 2.5, f64::INFINITY)?;
    let s = p.swapped();
    let residual = (stationary_variance(&p) - stationary_variance(&s)).abs()
        + (stationary_mean(&p) + stationary_mean(&s)).abs()
        + (asymptotic_distribution(&p, 40).variance() - asymptotic_distribution(&s, 40).variance()).abs();
    Ok(Outcome::new(
        residual,
        json!({"beta1": 1.0, "beta2": 2.5, "tau": "inf"}),
    ))
}

fn quantum_narrower_than_classical(_tol: f64) -> Result<Outcome> {
    let p = params(1.0, 2.5, f64::INFINITY)?;
    let quantum = stationary_variance(&p);
    let classical = classical_distribution(&p).variance();
    Ok(
        Outcome::new((quantum - classical).max(0.0), json!({"beta1": 1.0, "beta2": 2.5}))
            .detail(format!("quantum {quantum:.6} vs classical {classical:.6}")),
    )
}

fn classical_limit(_tol: f64) -> Result<Outcome> {
    let beta = 0.01;
    let p = params(beta, beta, f64::INFINITY)?;
    let window = (5.0 / beta).round() as i64;
    let d = asymptotic_distribution(&p, window as usize);
    let c = classical_distribution(&p);
    let worst = (-window..=window)
        .map(|k| {
            let q = k as f64 * p.hbar_omega();
            let density = c.density(q);
            (d.mass(k) / p.hbar_omega() - density).abs() / density
        })
        .fold(0.0, f64::max);
    Ok(Outcome::new(
        worst,
        json!({"beta1": beta, "beta2": beta, "window": window}),
    ))
}

fn isothermal_peak(_tol: f64) -> Result<Outcome> {
    let d = isothermal_distribution(2.5, 10);
    let prefactor = (2.5f64.cosh() - 1.0) / 2.5f64.sinh();
    let residual = (d.mass(0) - 1.25f64.tanh()).abs().max((d.mass(0) - prefactor).abs());
    Ok(Outcome::new(residual, json!({"beta": 2.5})).detail(format!("P(0) = {:.10}", d.mass(0))))
}

fn asymptotic_peak(_tol: f64) -> Result<Outcome> {
    // P(Q = 0) as the probability that initial and final levels coincide,
    // summed over independent thermal laws at β₁ and β₂
    let (q1, q2) = ((-1.0f64).exp(), (-2.5f64).exp());
    let mut direct = 0.0;
    for n in (0..200).rev() {
        direct += (1.0 - q1) * (1.0 - q2) * (q1 * q2).powi(n);
    }
    let a = asymptotic_prefactor(1.0, 2.5);
    Ok(Outcome::new((a - direct).abs(), json!({"beta1": 1.0, "beta2": 2.5})).detail(format!("A = {a:.10}")))
}

fn low_temperature_agreement(_tol: f64) -> Result<Outcome> {
    let p = params(8.0, 8.0, f64::INFINITY)?;
    let full = asymptotic_distribution(&p, 20);
    let z: f64 = (-1..=1).map(|k| full.mass(k)).sum();
    let low = low_temperature_distribution(&p);
    let worst = (-1..=1)
        .map(|k| (full.mass(k) / z - low.mass(k)).abs())
        .fold(0.0, f64::max);
    Ok(Outcome::new(worst, json!({"beta1": 8.0, "beta2": 8.0})).detail("bound e^(-2*8) = 1.1e-7"))
}

// ---- oracle ----

fn oracle_generator_stationary(_tol: f64) -> Result<Outcome> {
    let g = birth_death_generator(thermal_occupation(2.5), KERNEL_SIZE);
    let pi = g.stationary();
    let mut out = vec![0.0; pi.len()];
    g.apply(&pi, &mut out);
    out[KERNEL_SIZE] += g.leak_rate(&pi);
    let ratio = thermal_occupation(2.5) / (1.0 + thermal_occupation(2.5));
    let balance = pi.windows(2).map(|w| (w[1] / w[0] - ratio).abs()).fold(0.0, f64::max);
    let worst = out.iter().map(|x| x.abs()).fold(balance, f64::max);
    Ok(Outcome::new(worst, json!({"beta2": 2.5, "n_max": KERNEL_SIZE})))
}

fn oracle_ground_state(_tol: f64) -> Result<Outcome> {
    let pair = RelaxationPair::new(2.5, 2.0);
    let g = birth_death_generator(thermal_occupation(2.5), KERNEL_SIZE);
    let out = evolve(&g, &PopulationState::fock(0, KERNEL_SIZE), 2.0, &StepControl::default())?;
    let u = pair.u;
    let worst = (0..=KERNEL_SIZE)
        .map(|m| (out.p[m] - u.powi(m as i32) / (1.0 + u).powi(m as i32 + 1)).abs())
        .fold(0.0, f64::max);
    Ok(Outcome::new(worst, json!({"beta2": 2.5, "tau": 2.0, "initial": 0})))
}

fn oracle_stationary(_tol: f64) -> Result<Outcome> {
    let g = birth_death_generator(thermal_occupation(2.5), KERNEL_SIZE);
    let s = PopulationState::from_populations(g.stationary());
    let out = evolve(&g, &s, 3.0, &StepControl::default())?;
    let worst = out.p.iter().zip(&s.p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(Outcome::new(worst, json!({"beta2": 2.5, "tau": 3.0})))
}

fn oracle_relaxation_rate(_tol: f64) -> Result<Outcome> {
    let nbar = thermal_occupation(2.5);
    let g = birth_death_generator(nbar, KERNEL_SIZE);
    let mut worst: f64 = 0.0;
    for tau in TAUS {
        let out = evolve(&g, &PopulationState::fock(0, KERNEL_SIZE), tau, &StepControl::default())?;
        worst = worst.max((out.mean_level() - RelaxationPair::new(2.5, tau).u).abs());
    }
    Ok(Outcome::new(worst, json!({"beta2": 2.5, "tau": TAUS}))
        .detail("mean level from the ground state against u(tau)"))
}

fn oracle_leakage(_tol: f64) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut padding = 0;
    for tau in TAUS {
        let o = oracle_transition_matrix(3.0, tau, KERNEL_SIZE, &StepControl::default())?;
        worst = worst.max(o.max_leakage());
        padding = padding.max(o.padding);
    }
    Ok(
        Outcome::new(worst, json!({"beta2": 3.0, "tau": TAUS, "n_max": KERNEL_SIZE}))
            .detail(format!("padding {padding} levels")),
    )
}

fn oracle_entropy_monotone(_tol: f64) -> Result<Outcome> {
    let g = birth_death_generator(thermal_occupation(1.0), 60);
    let pi = g.stationary();
    let mut state = PopulationState::fock(5, 60);
    let mut last = relative_entropy(&state.p, &pi);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        state = evolve(&g, &state, 0.25, &StepControl::default())?;
        let now = relative_entropy(&state.p, &pi);
        worst = worst.max(now - last);
        last = now;
    }
    Ok(Outcome::new(
        worst,
        json!({"beta2": 1.0, "initial": 5, "grid": "0:5:0.25"}),
    ))
}

fn bruteforce_vs_inversion(_tol: f64) -> Result<Outcome> {
    let p = params(1.0, 3.0, 0.1)?;
    let brute = heat_distribution_bruteforce(&p, KERNEL_SIZE)?;
    let inverted = heat_distribution(&p, None)?;
    Ok(Outcome::new(
        brute.total_variation(&inverted),
        json!({"beta1": 1.0, "beta2": 3.0, "tau": 0.1}),
    ))
}

fn bruteforce_mean(_tol: f64) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for tau in [0.1, 1.0, 3.0] {
        let p = params(1.0, 3.0, tau)?;
        worst = worst.max((heat_distribution_bruteforce(&p, KERNEL_SIZE)?.mean() - mean_heat(&p)).abs());
    }
    Ok(Outcome::new(
        worst,
        json!({"beta1": 1.0, "beta2": 3.0, "tau": [0.1, 1.0, 3.0]}),
    ))
}

fn bruteforce_long_time(_tol: f64) -> Result<Outcome> {
    let p = params(1.0, 3.0, 20.0)?;
    let brute = heat_distribution_bruteforce(&p, KERNEL_SIZE)?;
    let limit = asymptotic_distribution(&p, brute.k_max());
    Ok(Outcome::new(
        max_abs_diff(&brute, &limit),
        json!({"beta1": 1.0, "beta2": 3.0, "tau": tau_json(20.0)}),
    ))
}
