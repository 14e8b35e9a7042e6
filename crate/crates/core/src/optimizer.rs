//! The exponent of `ln x` in the upper bound for `V(x)`.
//!
//! With `k = ceil(c ln ln x)` the two terms of the bound decay like
//! `(ln x)^-(1 - c + c ln c)` and `(ln x)^-(c ln 2)`. The first exponent
//! decreases in `c` on `(0, 1)` and the second increases, so the best
//! choice balances them:
//!
//! ```text
//! g(c) = 1 - c + c ln c - c ln 2 = 0.
//! ```
//!
//! `g'(c) = ln c - ln 2 < 0` on `(0, 1)`, so the root is unique there.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::image::totient_image_up_to;
use crate::sieve::SieveTable;

const BRACKET_EPS: f64 = 1e-6;
const MIN_TOLERANCE: f64 = 1e-14;

/// `g(c) = 1 - c + c ln c - c ln 2`.
pub fn balance(c: f64) -> f64 {
    1.0 - c + c * c.ln() - c * std::f64::consts::LN_2
}

fn balance_prime(c: f64) -> f64 {
    c.ln() - std::f64::consts::LN_2
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentSolution {
    pub c_star: f64,
    /// `c_star * ln 2`
    pub exponent: f64,
    /// `|g(c_star)|`
    pub residual: f64,
    pub iterations: u32,
    #[serde(skip)]
    pub bracket: (f64, f64),
}

/// Bisection on `(1e-6, 1 - 1e-6)` down to a width of `sqrt(tolerance)`,
/// then Newton steps kept inside the bracket until `|g| <= tolerance`.
pub fn solve_cstar(tolerance: f64) -> Result<ExponentSolution> {
    if !(tolerance >= MIN_TOLERANCE) {
        return Err(Error::Domain(format!(
            "tolerance must be at least {MIN_TOLERANCE:e}, got {tolerance:e}"
        )));
    }
    let (mut lo, mut hi) = (BRACKET_EPS, 1.0 - BRACKET_EPS);
    assert!(balance(lo) > 0.0 && balance(hi) < 0.0, "no sign change on the bracket");
    assert!(balance_prime(lo) < 0.0 && balance_prime(hi) < 0.0);

    let mut iterations = 0;
    let coarse = tolerance.sqrt();
    while hi - lo > coarse {
        let mid = 0.5 * (lo + hi);
        if balance(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }

    let mut c = 0.5 * (lo + hi);
    for _ in 0..100 {
        let g = balance(c);
        if g.abs() <= tolerance {
            break;
        }
        if g > 0.0 {
            lo = c;
        } else {
            hi = c;
        }
        let step = c - g / balance_prime(c);
        c = if step > lo && step < hi { step } else { 0.5 * (lo + hi) };
        iterations += 1;
    }
    let residual = balance(c).abs();
    Ok(ExponentSolution {
        c_star: c,
        exponent: c * std::f64::consts::LN_2,
        residual,
        iterations,
        bracket: (lo, hi),
    })
}

/// `(1 - c + c ln c, c ln 2, min of the two)`.
pub fn exponent_branches(c: f64) -> Result<(f64, f64, f64)> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Domain(format!("c must lie in (0, 1), got {c}")));
    }
    let first = 1.0 - c + c * c.ln();
    let second = c * std::f64::consts::LN_2;
    Ok((first, second, first.min(second)))
}

/// Pillai's exponent `ln 2 / e`.
pub fn pillai_exponent() -> f64 {
    std::f64::consts::LN_2 / std::f64::consts::E
}

/// `ceil(c ln ln x)`, at least 1.
pub fn k_of_x(x: f64, c: f64) -> Result<u32> {
    if !(x > std::f64::consts::E) {
        return Err(Error::Domain(format!("k(x) needs x > e, got {x}")));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Domain(format!("c must lie in (0, 1), got {c}")));
    }
    Ok(((c * x.ln().ln()).ceil() as u32).max(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalPoint {
    pub x: u64,
    pub v_count: u64,
    /// `V(x) (ln x)^exponent / x`
    pub ratio: f64,
}

/// `V(x) (ln x)^exponent / x` across a grid; the supremum estimates the
/// constant in `V(x) <= C x / (ln x)^exponent` at the scales computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalBoundReport {
    pub exponent: f64,
    pub points: Vec<EmpiricalPoint>,
    pub sup_ratio: f64,
    pub arg_sup: u64,
}

impl EmpiricalBoundReport {
    pub fn grid(&self) -> Vec<u64> {
        self.points.iter().map(|p| p.x).collect()
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.ratio).collect()
    }
}

pub fn empirical_bound(grid: &[u64], table: &SieveTable) -> Result<EmpiricalBoundReport> {
    let solution = solve_cstar(1e-12)?;
    empirical_bound_with_exponent(grid, table, solution.exponent)
}

pub fn empirical_bound_with_exponent(
    grid: &[u64],
    table: &SieveTable,
    exponent: f64,
) -> Result<EmpiricalBoundReport> {
    if grid.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    let mut points = Vec::with_capacity(grid.len());
    for &x in grid {
        if x < 2 {
            return Err(Error::Domain(format!("grid points must be >= 2, got {x}")));
        }
        let v = totient_image_up_to(x, table)?.count();
        let xf = x as f64;
        points.push(EmpiricalPoint {
            x,
            v_count: v,
            ratio: v as f64 * xf.ln().powf(exponent) / xf,
        });
    }
    let best = points
        .iter()
        .fold(points[0], |best, p| if p.ratio > best.ratio { *p } else { best });
    Ok(EmpiricalBoundReport {
        exponent,
        points,
        sup_ratio: best.ratio,
        arg_sup: best.x,
    })
}
