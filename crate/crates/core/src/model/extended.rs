//! Double-double arithmetic (an unevaluated sum `hi + lo` of two f64).
//!
//! Gives roughly 106 bits of significand, enough to evaluate the alternating
//! transition-kernel sum at condition numbers up to about 1e24.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

const LN_2: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

/// Argument reduction divides by 2^EXP_SQUARINGS before the Taylor step.
const EXP_SQUARINGS: i32 = 10;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        DoubleDouble { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Exact scaling by 2^k.
    fn ldexp(self, k: i32) -> Self {
        // split so neither factor overflows on its own
        let half = k / 2;
        let a = 2f64.powi(half);
        let b = 2f64.powi(k - half);
        DoubleDouble {
            hi: self.hi * a * b,
            lo: self.lo * a * b,
        }
    }

    pub fn powi(self, mut n: u32) -> Self {
        let mut base = self;
        let mut acc = DoubleDouble::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    /// exp(x) - 1, accurate for small |x|.
    pub fn exp_m1(self) -> Self {
        if self.hi.abs() > 0.5 {
            return self.exp() - DoubleDouble::ONE;
        }
        expm1_reduced(self)
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.78 {
            return DoubleDouble {
                hi: f64::INFINITY,
                lo: 0.0,
            };
        }
        if self.hi < -745.2 {
            return DoubleDouble::ZERO;
        }
        let k = (self.hi / LN_2.hi).round();
        let r = self - LN_2 * DoubleDouble::from(k);
        let s = expm1_reduced(r);
        (s + DoubleDouble::ONE).ldexp(k as i32)
    }
}

/// expm1 for |x| below about ln(2)/2 via scaled Taylor series and
/// repeated doubling (1+s)^2 - 1 = 2s + s^2.
fn expm1_reduced(x: DoubleDouble) -> DoubleDouble {
    let r = x.ldexp(-EXP_SQUARINGS);
    let mut s = r;
    let mut term = r;
    for i in 2..=30 {
        term = term * r / DoubleDouble::from(i as f64);
        s = s + term;
        if term.hi.abs() <= 1e-36 * s.hi.abs() {
            break;
        }
    }
    for _ in 0..EXP_SQUARINGS {
        s = s.ldexp(1) + s * s;
    }
    s
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b * DoubleDouble::from(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * DoubleDouble::from(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::from(q3)
    }
}
