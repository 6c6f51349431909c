use std::iter::Sum;

use num_complex::Complex64;

/// Neumaier-compensated real sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RealAcc {
    sum: f64,
    comp: f64,
}

impl RealAcc {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &RealAcc) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Sum<f64> for RealAcc {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = RealAcc::new();
        iter.for_each(|v| acc.add(v));
        acc
    }
}

/// Compensated complex accumulator: one [`RealAcc`] per component plus a
/// term count.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexAcc {
    re: RealAcc,
    im: RealAcc,
    terms: u64,
}

impl ComplexAcc {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
        self.terms += 1;
    }

    #[inline]
    pub fn sub(&mut self, z: Complex64) {
        self.add(-z);
    }

    pub fn merge(&mut self, other: &ComplexAcc) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
        self.terms += other.terms;
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    pub fn terms(&self) -> u64 {
        self.terms
    }
}

impl Sum<Complex64> for ComplexAcc {
    fn sum<I: Iterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = ComplexAcc::new();
        iter.for_each(|z| acc.add(z));
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_mass() {
        let mut acc = RealAcc::new();
        for v in [1e200, 0.1, 0.2, 0.3, -1e200] {
            acc.add(v);
        }
        assert!((acc.value() - 0.6).abs() < 1e-15);
        let naive: f64 = [1e200, 0.1, 0.2, 0.3, -1e200].iter().sum();
        assert_eq!(naive, 0.0);
    }

    #[test]
    fn merge_matches_sequential() {
        let xs: Vec<f64> = (1..1000).map(|i| 1.0 / i as f64).collect();
        let whole: RealAcc = xs.iter().copied().sum();
        let mut left: RealAcc = xs[..400].iter().copied().sum();
        let right: RealAcc = xs[400..].iter().copied().sum();
        left.merge(&right);
        assert!((left.value() - whole.value()).abs() < 1e-15);
    }

    #[test]
    fn complex_terms_are_counted() {
        let acc: ComplexAcc = (0..10).map(|k| Complex64::new(k as f64, -1.0)).sum();
        assert_eq!(acc.terms(), 10);
        assert_eq!(acc.value(), Complex64::new(45.0, -10.0));
    }
}
