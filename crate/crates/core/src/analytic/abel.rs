//! Abel summation as a finite identity.
//!
//! For points `λ_1 < λ_2 < ...`, weights `a_n` and `α(t) = Σ_{λ_n ≤ t} a_n`,
//!
//! ```text
//! Σ_{λ_n ≤ x} a_n f(λ_n) = α(x) f(x) - ∫_{λ_1}^{x} α(t) f'(t) dt.
//! ```
//!
//! `α` is constant on each `[λ_n, λ_{n+1})`, so the integral splits into
//! segments `A_n (f(b_n) - f(λ_n))` with `b_n = min(λ_{n+1}, x)`. That form
//! needs only `f`; the quadrature mode integrates `f'` instead and checks the
//! same identity through a different route.

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

pub struct AbelInput<'a> {
    pub points: &'a [f64],
    pub weights: &'a [f64],
    pub f: &'a dyn Fn(f64) -> f64,
    pub f_prime: Option<&'a dyn Fn(f64) -> f64>,
    pub x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralMode {
    /// Evaluate each staircase segment exactly from `f`.
    ExactSegments,
    /// Composite Simpson on `f'` with this many panels per segment.
    Quadrature { panels: u32 },
}

impl AbelInput<'_> {
    fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::Domain("Abel input needs at least one point".into()));
        }
        if self.points.len() != self.weights.len() {
            return Err(Error::Domain(format!(
                "{} points but {} weights",
                self.points.len(),
                self.weights.len()
            )));
        }
        if self.points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("points must be strictly increasing".into()));
        }
        if !(self.x >= self.points[0]) {
            return Err(Error::Domain(format!(
                "x = {} is below the first point {}",
                self.x, self.points[0]
            )));
        }
        Ok(())
    }
}

/// `|LHS - RHS|` of the Abel identity at `input.x`.
pub fn abel_check(input: &AbelInput<'_>, mode: IntegralMode) -> Result<f64> {
    input.validate()?;
    let f = input.f;
    let active = input.points.partition_point(|&p| p <= input.x);

    let lhs: CompensatedSum = input.points[..active]
        .iter()
        .zip(input.weights)
        .map(|(&p, &a)| a * f(p))
        .collect();

    let mut alpha = CompensatedSum::new();
    let mut integral = CompensatedSum::new();
    for n in 0..active {
        alpha.add(input.weights[n]);
        let a = input.points[n];
        let b = input.points.get(n + 1).copied().unwrap_or(input.x).min(input.x);
        let segment = match mode {
            IntegralMode::ExactSegments => f(b) - f(a),
            IntegralMode::Quadrature { panels } => {
                let f_prime = input.f_prime.ok_or_else(|| {
                    Error::Domain("quadrature mode needs f_prime".into())
                })?;
                simpson(f_prime, a, b, panels)?
            }
        };
        integral.add(alpha.value() * segment);
    }
    let rhs = alpha.value() * f(input.x) - integral.value();
    Ok((lhs.value() - rhs).abs())
}

/// Composite Simpson rule, one parabola per panel.
fn simpson(g: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: u32) -> Result<f64> {
    if panels == 0 {
        return Err(Error::Domain("quadrature needs at least one panel".into()));
    }
    if b <= a {
        return Ok(0.0);
    }
    let h = (b - a) / panels as f64;
    let mut acc = CompensatedSum::new();
    for i in 0..panels {
        let left = a + i as f64 * h;
        let right = if i + 1 == panels { b } else { left + h };
        acc.add((right - left) / 6.0 * (g(left) + 4.0 * g(0.5 * (left + right)) + g(right)));
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naturals(n: usize) -> (Vec<f64>, Vec<f64>) {
        ((1..=n).map(|k| k as f64).collect(), vec![1.0; n])
    }

    #[test]
    fn constant_f_is_exact() {
        let (points, weights) = naturals(50);
        let input = AbelInput {
            points: &points,
            weights: &weights,
            f: &|_| 3.5,
            f_prime: Some(&|_| 0.0),
            x: 37.5,
        };
        assert_eq!(abel_check(&input, IntegralMode::ExactSegments).unwrap(), 0.0);
        assert_eq!(
            abel_check(&input, IntegralMode::Quadrature { panels: 4 }).unwrap(),
            0.0
        );
    }

    #[test]
    fn log_factorial() {
        let (points, weights) = naturals(100);
        let input = AbelInput {
            points: &points,
            weights: &weights,
            f: &f64::ln,
            f_prime: Some(&|t| 1.0 / t),
            x: 100.0,
        };
        assert!(abel_check(&input, IntegralMode::ExactSegments).unwrap() < 1e-9);
        assert!(abel_check(&input, IntegralMode::Quadrature { panels: 64 }).unwrap() < 1e-6);
    }

    #[test]
    fn endpoint_between_points() {
        let points = [1.0, 2.5, 4.0];
        let weights = [2.0, -1.0, 0.5];
        let input = AbelInput {
            points: &points,
            weights: &weights,
            f: &|t| t * t,
            f_prime: Some(&|t| 2.0 * t),
            x: 3.0,
        };
        // LHS = 2*1 - 6.25 = -4.25; RHS = α(3) * 9 - [2*(6.25-1) + 1*(9-6.25)] = 9 - 13.25
        assert!(abel_check(&input, IntegralMode::ExactSegments).unwrap() < 1e-15);
        // Simpson is exact on the linear f'
        assert!(abel_check(&input, IntegralMode::Quadrature { panels: 1 }).unwrap() < 1e-14);
    }

    #[test]
    fn rejects_bad_input() {
        let points = [1.0, 2.0];
        let weights = [1.0, 1.0];
        let mut input = AbelInput {
            points: &points,
            weights: &weights,
            f: &f64::ln,
            f_prime: None,
            x: 0.5,
        };
        assert!(abel_check(&input, IntegralMode::ExactSegments).is_err());
        input.x = 2.0;
        assert!(abel_check(&input, IntegralMode::Quadrature { panels: 8 }).is_err());
        let unsorted = [2.0, 1.0];
        input.points = &unsorted;
        assert!(abel_check(&input, IntegralMode::ExactSegments).is_err());
        input.points = &points[..1];
        assert!(abel_check(&input, IntegralMode::ExactSegments).is_err());
    }
}
