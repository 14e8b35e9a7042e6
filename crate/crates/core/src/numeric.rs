//! Floating-point helpers shared by the analytic checks.

/// Neumaier (improved Kahan) compensated summation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        acc.extend(iter);
        acc
    }
}

/// Rounds to 15 significant decimal digits, the precision used in reports.
pub fn round_sig15(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.14e}").parse().unwrap_or(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_beats_naive() {
        let values = std::iter::once(1.0).chain(std::iter::repeat(1e-16).take(1_000_000));
        let naive: f64 = values.clone().sum();
        let comp: CompensatedSum = values.collect();
        assert_eq!(naive, 1.0);
        assert!((comp.value() - (1.0 + 1e-10)).abs() < 1e-20);
    }

    #[test]
    fn cancellation() {
        let comp: CompensatedSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(comp.value(), 2.0);
    }

    #[test]
    fn sig15() {
        assert_eq!(round_sig15(0.1 + 0.2), 0.3);
        assert_eq!(round_sig15(std::f64::consts::PI).to_string(), "3.14159265358979");
        assert_eq!(round_sig15(0.0), 0.0);
        assert_eq!(round_sig15(-1234567.891234567891), -1234567.89123457);
    }
}
