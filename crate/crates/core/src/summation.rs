//! Compensated (Kahan–Babuška–Neumaier) summation.

use num_complex::Complex64;

/// Running sum carrying a compensation term for lost low-order bits.
///
/// Unlike plain Kahan summation this stays accurate when an added term is
/// larger in magnitude than the running sum, which is the common case in
/// alternating series.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of complex terms, real and imaginary parts independently.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexNeumaierSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexNeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Compensated sum of a slice, accumulated in index order.
pub fn neumaier_sum(xs: &[f64]) -> f64 {
    xs.iter().copied().collect::<NeumaierSum>().value()
}
