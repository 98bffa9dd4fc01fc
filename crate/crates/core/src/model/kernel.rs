//! Transition probabilities `X_{m,n}(τ)` between Fock states of the damped
//! oscillator.
//!
//! Three evaluation routes are provided:
//!
//! * the finite sum over `j ∈ [0, min(m, n)]` with argument
//!   `z = −v(1+u)/(u(1+v))` ([`transition_direct`]). Its terms alternate in
//!   sign once `v > 0`, and the cancellation grows quickly with `m, n, τ`;
//! * the hypergeometric form `X = u^m (1+v)^n (1+u)^{−m−n−1} F[−n,−m,1;y]`
//!   ([`transition_hypergeometric`]), with `F` evaluated through the Euler
//!   transform `(1−y)^{1+m+n} F[1+n,1+m,1;y]` when `y < 1` and through its
//!   terminating polynomial otherwise. All terms are positive.
//! * the first route again in double-double arithmetic, with `u` and `v`
//!   recomputed from `(β₂, τ)` ([`transition_direct_extended`]).
//!
//! `y < 1` holds exactly when `v > 0`, so the Euler series converges in the
//! regime where the direct sum cancels.
//!
//! Every term is written as a product of powers of `u/(1+u)`,
//! `(1+v)/(1+u)`, `−v/(1+u)` and `e^{−τ}/(1+u)²`, all at most one in
//! magnitude, so nothing but the integer coefficients can overflow.

use serde::Serialize;

use super::extended::DoubleDouble;
use super::relaxation::RelaxationPair;
use crate::error::{Error, Result};
use crate::summation::NeumaierSum;

/// Largest `m + n` accepted by the kernel; binomial coefficients beyond it
/// leave the f64 range.
pub const MAX_INDEX_SUM: usize = 1000;

pub const DEFAULT_CONDITION_LIMIT: f64 = 1e6;

/// Relative size of the remaining series tail at which summation stops.
const SERIES_TAIL_TOLERANCE: f64 = 1e-17;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelPolicy {
    /// Largest cancellation estimate accepted from the f64 direct sum.
    pub condition_limit: f64,
    pub series_max_terms: usize,
    /// Allow the double-double tier when both f64 routes fail.
    pub extended_precision: bool,
    pub extended_condition_limit: f64,
}

impl Default for KernelPolicy {
    fn default() -> Self {
        KernelPolicy {
            condition_limit: DEFAULT_CONDITION_LIMIT,
            series_max_terms: 200_000,
            extended_precision: true,
            extended_condition_limit: 1e24,
        }
    }
}

/// A kernel value with its cancellation estimate
/// `max_j |term_j| / |result|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Conditioned {
    pub value: f64,
    pub condition: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KernelPath {
    Identity,
    Stationary,
    Direct,
    Hypergeometric,
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    pub value: f64,
    pub condition: f64,
    pub path: KernelPath,
}

fn check_indices(m: usize, n: usize) -> Result<()> {
    if m + n > MAX_INDEX_SUM {
        return Err(Error::IndexTooLarge {
            sum: m + n,
            limit: MAX_INDEX_SUM,
        });
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (1..=k).fold(1.0, |acc, i| acc * (n - k + i) as f64 / i as f64)
}

fn kronecker(m: usize, n: usize) -> f64 {
    if m == n {
        1.0
    } else {
        0.0
    }
}

/// `X_{m,n}` at `τ = 0` (identity) or `τ = ∞` (thermal law at `β₂`).
fn limit_value(m: usize, n: usize, pair: &RelaxationPair) -> Option<f64> {
    if pair.tau() == 0.0 {
        Some(kronecker(m, n))
    } else if pair.tau() == f64::INFINITY {
        let nbar = pair.nbar2();
        Some((nbar / (1.0 + nbar)).powi(m as i32) / (1.0 + nbar))
    } else {
        None
    }
}

fn powi(x: f64, k: usize) -> f64 {
    x.powi(k as i32)
}

/// Evaluates the alternating sum in f64 and reports its condition estimate
/// without judging it.
pub fn direct_sum(m: usize, n: usize, pair: &RelaxationPair) -> Result<Conditioned> {
    check_indices(m, n)?;
    if let Some(value) = limit_value(m, n, pair) {
        return Ok(Conditioned { value, condition: 1.0 });
    }
    let scale = 1.0 + pair.u;
    let a = pair.u / scale;
    let b = pair.one_plus_v() / scale;
    let c = -pair.v / scale;

    let mut coefficient = binomial(m + n, n);
    let mut acc = NeumaierSum::new();
    let mut largest: f64 = 0.0;
    for j in 0..=m.min(n) {
        let term = coefficient * powi(a, m - j) * powi(b, n - j) * powi(c, j);
        largest = largest.max(term.abs());
        acc.add(term);
        if j < m.min(n) {
            coefficient *= ((n - j) * (m - j)) as f64 / ((j + 1) * (m + n - j)) as f64;
        }
    }
    let sum = acc.value();
    let condition = if largest == 0.0 {
        1.0
    } else if sum > 0.0 {
        largest / sum
    } else {
        f64::INFINITY
    };
    Ok(Conditioned {
        value: sum / scale,
        condition,
    })
}

/// `X_{m,n}` from the finite alternating sum, refused when its cancellation
/// estimate exceeds [`DEFAULT_CONDITION_LIMIT`].
pub fn transition_direct(m: usize, n: usize, pair: &RelaxationPair) -> Result<Conditioned> {
    transition_direct_with_limit(m, n, pair, DEFAULT_CONDITION_LIMIT)
}

pub fn transition_direct_with_limit(m: usize, n: usize, pair: &RelaxationPair, limit: f64) -> Result<Conditioned> {
    let out = direct_sum(m, n, pair)?;
    if out.condition > limit {
        return Err(Error::ConditionLoss {
            condition: out.condition,
            limit,
        });
    }
    Ok(out)
}

/// `X_{m,n}` through `F[−n,−m,1;y]`.
pub fn transition_hypergeometric(m: usize, n: usize, pair: &RelaxationPair) -> Result<f64> {
    transition_hypergeometric_with_cap(m, n, pair, KernelPolicy::default().series_max_terms)
}

pub fn transition_hypergeometric_with_cap(m: usize, n: usize, pair: &RelaxationPair, max_terms: usize) -> Result<f64> {
    check_indices(m, n)?;
    if let Some(value) = limit_value(m, n, pair) {
        return Ok(value);
    }
    if pair.y() < 1.0 {
        euler_series(m, n, pair, max_terms)
    } else {
        Ok(terminating_polynomial(m, n, pair))
    }
}

/// `X_{m,n}` as `u^m (1+v)^n (1+u)^{−m−n−1} (1−y)^{1+m+n} Σ_k y^k C(n+k,k) C(m+k,k)`.
///
/// Only valid for `0 ≤ y < 1`. Stops once the geometric bound on the
/// remaining tail drops below `1e-17` of the partial sum.
pub fn euler_series(m: usize, n: usize, pair: &RelaxationPair, max_terms: usize) -> Result<f64> {
    check_indices(m, n)?;
    let y = pair.y();
    if !(0.0..1.0).contains(&y) {
        return Err(Error::SeriesNonConvergent { y });
    }
    let scale = 1.0 + pair.u;
    let a = pair.u / scale;
    let b = pair.one_plus_v() / scale;
    let lead = powi(1.0 - y, 1 + m + n) * powi(a, m) * powi(b, n) / scale;
    if lead == 0.0 {
        return Err(Error::TruncationFailure { terms: 0 });
    }
    let ratio = |k: usize| y * ((n + k + 1) * (m + k + 1)) as f64 / ((k + 1) * (k + 1)) as f64;

    let mut acc = NeumaierSum::new();
    let mut term = lead;
    for k in 0..max_terms {
        acc.add(term);
        let next = term * ratio(k);
        let next_ratio = ratio(k + 1);
        if next_ratio < 1.0 {
            let tail = next / (1.0 - next_ratio);
            if tail <= SERIES_TAIL_TOLERANCE * acc.value() {
                return Ok(acc.value());
            }
        }
        term = next;
    }
    Err(Error::TruncationFailure { terms: max_terms })
}

/// `F[−n,−m,1;y] = Σ_j C(n,j) C(m,j) y^j` summed as a finite series of
/// positive terms.
pub fn terminating_polynomial(m: usize, n: usize, pair: &RelaxationPair) -> f64 {
    let scale = 1.0 + pair.u;
    let a = pair.u / scale;
    let b = pair.one_plus_v() / scale;
    let d = pair.decay() / (scale * scale);
    let mut coefficient = 1.0;
    let mut acc = NeumaierSum::new();
    for j in 0..=m.min(n) {
        acc.add(coefficient * powi(a, m - j) * powi(b, n - j) * powi(d, j));
        coefficient *= ((n - j) * (m - j)) as f64 / ((j + 1) * (j + 1)) as f64;
    }
    acc.value() / scale
}

/// The alternating sum evaluated in double-double arithmetic, with `u` and
/// `v` recomputed from `(β₂, τ)` at the same precision.
pub fn transition_direct_extended(m: usize, n: usize, pair: &RelaxationPair) -> Result<Conditioned> {
    check_indices(m, n)?;
    if let Some(value) = limit_value(m, n, pair) {
        return Ok(Conditioned { value, condition: 1.0 });
    }
    let one = DoubleDouble::ONE;
    let nbar = one / DoubleDouble::from(pair.beta2()).exp_m1();
    let decay = DoubleDouble::from(-pair.tau()).exp();
    let growth = -DoubleDouble::from(-pair.tau()).exp_m1();
    let u = nbar * growth;
    let v = nbar - (nbar + one) * decay;
    let one_plus_v = (nbar + one) * growth;

    let scale = one + u;
    let a = u / scale;
    let b = one_plus_v / scale;
    let c = -v / scale;

    let mut coefficient = DoubleDouble::ONE;
    for i in 1..=m.min(n) {
        coefficient = coefficient * DoubleDouble::from((m.max(n) + i) as f64) / DoubleDouble::from(i as f64);
    }
    let mut acc = DoubleDouble::ZERO;
    let mut largest: f64 = 0.0;
    for j in 0..=m.min(n) {
        let term = coefficient * a.powi((m - j) as u32) * b.powi((n - j) as u32) * c.powi(j as u32);
        largest = largest.max(term.hi().abs());
        acc = acc + term;
        if j < m.min(n) {
            coefficient = coefficient * DoubleDouble::from(((n - j) * (m - j)) as f64)
                / DoubleDouble::from(((j + 1) * (m + n - j)) as f64);
        }
    }
    let sum = acc.to_f64();
    let condition = if largest == 0.0 {
        1.0
    } else if sum > 0.0 {
        largest / sum
    } else {
        f64::INFINITY
    };
    Ok(Conditioned {
        value: (acc / scale).to_f64(),
        condition,
    })
}

/// Evaluates `X_{m,n}` with the cheapest route whose accuracy can be
/// certified: direct sum, then hypergeometric form, then double-double.
pub fn transition(m: usize, n: usize, pair: &RelaxationPair, policy: &KernelPolicy) -> Result<KernelValue> {
    check_indices(m, n)?;
    if let Some(value) = limit_value(m, n, pair) {
        let path = if pair.tau() == 0.0 {
            KernelPath::Identity
        } else {
            KernelPath::Stationary
        };
        return Ok(KernelValue {
            value,
            condition: 1.0,
            path,
        });
    }
    let direct = direct_sum(m, n, pair)?;
    if direct.condition <= policy.condition_limit {
        return Ok(KernelValue {
            value: direct.value,
            condition: direct.condition,
            path: KernelPath::Direct,
        });
    }
    let hyper_err = match transition_hypergeometric_with_cap(m, n, pair, policy.series_max_terms) {
        Ok(value) => {
            return Ok(KernelValue {
                value,
                condition: 1.0,
                path: KernelPath::Hypergeometric,
            })
        }
        Err(e) => e,
    };
    if !policy.extended_precision {
        return Err(hyper_err);
    }
    let extended = transition_direct_extended(m, n, pair)?;
    if extended.condition > policy.extended_condition_limit {
        return Err(Error::ConditionLoss {
            condition: extended.condition,
            limit: policy.extended_condition_limit,
        });
    }
    Ok(KernelValue {
        value: extended.value,
        condition: extended.condition,
        path: KernelPath::Extended,
    })
}

/// Upper bound on `Σ_{m > m_max} X_{m,n}`.
///
/// The column generating function is
/// `g_n(s) = h(s)^n / (1 + u(1−s))` with `h(s) = (1 + v(1−s)) / (1 + u(1−s))`,
/// so `P(m > m_max) ≤ g_n(s) / s^{m_max+1}` for every `1 < s < 1 + 1/u`.
/// The bound is minimised over `ln s` by golden-section search; the
/// exponent is convex in `ln s`.
pub fn column_tail_bound(n: usize, m_max: usize, pair: &RelaxationPair) -> f64 {
    if pair.tau() == 0.0 || pair.u == 0.0 {
        // no upward transitions
        return if n <= m_max { 0.0 } else { 1.0 };
    }
    let (u, v) = (pair.u, pair.v);
    let level = (m_max + 1) as f64;
    let log_bound = |t: f64| {
        let grow = t.exp_m1();
        let den = (-u * grow).ln_1p();
        let num = (-v * grow).ln_1p();
        -den + n as f64 * (num - den) - level * t
    };
    let mut lo = 0.0;
    let mut hi = (1.0 / u).ln_1p() * (1.0 - 1e-9);
    if v > 0.0 {
        hi = hi.min((1.0 / v).ln_1p() * (1.0 - 1e-9));
    }
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - golden * (hi - lo);
    let mut x2 = lo + golden * (hi - lo);
    let mut f1 = log_bound(x1);
    let mut f2 = log_bound(x2);
    for _ in 0..200 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = log_bound(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = log_bound(x2);
        }
        if hi - lo < 1e-12 * hi.max(1.0) {
            break;
        }
    }
    f1.min(f2).min(0.0).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(beta2: f64, tau: f64) -> RelaxationPair {
        RelaxationPair::new(beta2, tau)
    }

    #[test]
    fn ground_state_column_is_geometric() {
        for (beta2, tau) in [(2.5, 2.0), (3.0, 0.1), (1.0, 5.0), (0.3, 0.7)] {
            let p = pair(beta2, tau);
            for m in 0..30 {
                let expected = p.u.powi(m as i32) / (1.0 + p.u).powi(m as i32 + 1);
                let got = transition_direct(m, 0, &p).unwrap().value;
                assert!((got - expected).abs() <= 1e-14 * expected, "m={m}");
                let hyper = transition_hypergeometric(m, 0, &p).unwrap();
                assert!((hyper - expected).abs() <= 1e-14 * expected);
            }
        }
    }

    #[test]
    fn identity_at_zero_time() {
        let p = pair(3.0, 0.0);
        for m in 0..10 {
            for n in 0..10 {
                let expected = kronecker(m, n);
                assert_eq!(transition_direct(m, n, &p).unwrap().value, expected);
                assert_eq!(transition_hypergeometric(m, n, &p).unwrap(), expected);
                assert_eq!(
                    transition(m, n, &p, &KernelPolicy::default()).unwrap().path,
                    KernelPath::Identity
                );
            }
        }
    }

    #[test]
    fn small_time_is_close_to_identity() {
        let p = pair(3.0, 1e-9);
        let x = transition_direct(5, 5, &p).unwrap().value;
        assert!((x - 1.0).abs() < 1e-7);
        assert!(transition_direct(4, 5, &p).unwrap().value < 1e-7);
    }

    #[test]
    fn one_one_entry_closed_form() {
        // X_{1,1} = (2u + uv - v) / (1+u)^3 from the two-term sum
        let p = pair(2.5, 0.8);
        let (u, v) = (p.u, p.v);
        let expected = (2.0 * u + u * v - v) / (1.0 + u).powi(3);
        assert!((transition_direct(1, 1, &p).unwrap().value - expected).abs() < 1e-15);
        assert!((transition_hypergeometric(1, 1, &p).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn long_time_columns_forget_initial_state() {
        // column n differs from column 0 by at most n e^{-tau} in total variation
        let tau = 20.0;
        let p = pair(2.5, tau);
        let nbar = p.nbar2();
        let policy = KernelPolicy::default();
        for m in 0..20 {
            let expected = (nbar / (1.0 + nbar)).powi(m as i32) / (1.0 + nbar);
            for n in [0, 1, 3, 4, 10, 25] {
                let got = transition(m, n, &p, &policy).unwrap().value;
                let err = (got - expected).abs();
                assert!(err <= (n as f64 + 1.0) * (-tau).exp(), "m={m} n={n}");
                if n <= 4 {
                    assert!(err < 1e-8, "m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn cancellation_is_detected() {
        // tau = 5 at beta2 = 3: v > 0 and large (m, n) lose everything
        let p = pair(3.0, 5.0);
        assert!(p.v > 0.0);
        match transition_direct(30, 30, &p) {
            Err(Error::ConditionLoss { condition, .. }) => assert!(condition > 1e6),
            other => panic!("expected ConditionLoss, got {other:?}"),
        }
        let kv = transition(30, 30, &p, &KernelPolicy::default()).unwrap();
        assert_eq!(kv.path, KernelPath::Hypergeometric);
        let ext = transition_direct_extended(30, 30, &p).unwrap();
        assert!(
            (ext.value - kv.value).abs() <= 1e-13 * kv.value,
            "{} vs {}",
            ext.value,
            kv.value
        );
    }

    #[test]
    fn series_refuses_divergent_regime() {
        let p = pair(3.0, 1.0);
        assert!(p.y() > 1.0);
        assert!(matches!(
            euler_series(3, 4, &p, 1000),
            Err(Error::SeriesNonConvergent { .. })
        ));
        // the hypergeometric route switches to the terminating polynomial
        let direct = transition_direct(3, 4, &p).unwrap().value;
        assert!((transition_hypergeometric(3, 4, &p).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn series_cap_reports_truncation() {
        let p = pair(1.0, 1.2);
        assert!(p.y() < 1.0 && p.y() > 0.5);
        assert!(matches!(
            euler_series(20, 20, &p, 3),
            Err(Error::TruncationFailure { terms: 3 })
        ));
    }

    #[test]
    fn extended_matches_direct_when_well_conditioned() {
        let p = pair(2.5, 0.5);
        for (m, n) in [(0, 0), (3, 7), (12, 12), (30, 2)] {
            let d = transition_direct(m, n, &p).unwrap();
            let e = transition_direct_extended(m, n, &p).unwrap();
            assert!((d.value - e.value).abs() <= 1e-14 * e.value.max(1e-300));
        }
    }

    #[test]
    fn rejects_huge_indices() {
        let p = pair(1.0, 1.0);
        assert!(matches!(
            transition_direct(600, 600, &p),
            Err(Error::IndexTooLarge { .. })
        ));
    }

    #[test]
    fn tail_bound_dominates_actual_tail() {
        let policy = KernelPolicy::default();
        for (beta2, tau) in [(3.0, 0.1), (1.0, 2.0), (0.5, 5.0)] {
            let p = pair(beta2, tau);
            for n in [0, 5, 15] {
                let m_max = 20;
                let kept: f64 = (0..=m_max).map(|m| transition(m, n, &p, &policy).unwrap().value).sum();
                let actual = 1.0 - kept;
                let bound = column_tail_bound(n, m_max, &p);
                assert!(
                    actual <= bound + 1e-14,
                    "beta2={beta2} tau={tau} n={n}: {actual:e} > {bound:e}"
                );
            }
        }
    }

    #[test]
    fn tail_bound_zero_without_upward_transitions() {
        assert_eq!(column_tail_bound(3, 5, &pair(1.0, 0.0)), 0.0);
        assert_eq!(column_tail_bound(6, 5, &pair(1.0, 0.0)), 1.0);
    }
}
