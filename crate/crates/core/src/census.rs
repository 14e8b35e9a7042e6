//! Counts of integers by number of distinct prime factors, and the exact
//! integer form of the upper bound for `V(x)`.
//!
//! If `omega(n) >= k + 1` then at least `k` odd primes divide `n`, each
//! contributing an even factor `p - 1` to `phi(n)`, so `2^k | phi(n)`.
//! A totient value `v <= x` therefore either has a preimage with
//! `omega(n) <= k` or is a multiple of `2^k`, which gives
//!
//! ```text
//! V(x) <= rho_1(x) + ... + rho_k(x) + x / 2^k.
//! ```
//!
//! The right-hand side is carried as an exact rational.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::image::TotientImage;
use crate::sieve::SieveTable;

/// Largest `k` accepted by [`bound_chain`]; keeps `2^k` and the slack
/// numerator inside `i128`.
pub const MAX_BOUND_K: u32 = 64;

/// `rho_k(x)` for `k = 1..=kmax`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhoTable {
    pub x: u64,
    pub kmax: u32,
    /// `counts[k - 1] = rho_k(x)`.
    pub counts: Vec<u64>,
}

impl RhoTable {
    /// `rho_k(x)`, zero for `k` outside `1..=kmax`.
    pub fn rho(&self, k: u32) -> u64 {
        if k == 0 || k > self.kmax {
            0
        } else {
            self.counts[k as usize - 1]
        }
    }

    /// `rho_1(x) + ... + rho_k(x)`.
    pub fn cumulative(&self, k: u32) -> u64 {
        self.counts.iter().take(k as usize).sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

fn check_x(x: u64, table: &SieveTable) -> Result<()> {
    if x == 0 || x > table.limit() {
        return Err(Error::OutOfRange {
            what: "x",
            value: x,
            limit: table.limit(),
        });
    }
    Ok(())
}

/// Single pass over `omega[2..=x]`. Integers with more than `kmax` distinct
/// prime factors are not counted.
pub fn rho_table(x: u64, kmax: u32, table: &SieveTable) -> Result<RhoTable> {
    check_x(x, table)?;
    if kmax == 0 {
        return Err(Error::Domain("kmax must be at least 1".into()));
    }
    // omega < 16 for every n < 2^32
    let mut hist = [0u64; 256];
    for &w in &table.omega_slice()[2..=x as usize] {
        hist[w as usize] += 1;
    }
    let counts = (1..=kmax as usize)
        .map(|k| hist.get(k).copied().unwrap_or(0))
        .collect();
    Ok(RhoTable { x, kmax, counts })
}

/// Every `n <= x` with `omega(n) >= k + 1` whose totient is not divisible by `2^k`.
///
/// The list is always empty; anything else means the tables are wrong.
pub fn check_divisibility(x: u64, k: u32, table: &SieveTable) -> Result<Vec<u64>> {
    check_x(x, table)?;
    let phi = table.phi_slice();
    let omega = table.omega_slice();
    Ok((1..=x as usize)
        .filter(|&n| omega[n] as u32 > k && phi[n].trailing_zeros() < k)
        .map(|n| n as u64)
        .collect())
}

/// One exact instance of `V(x) <= rho_1 + ... + rho_k + x / 2^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub x: u64,
    pub k: u32,
    pub v_count: u64,
    pub census_sum: u64,
    /// `x / 2^k`, reduced.
    pub tail: Ratio<i128>,
    /// `ceil(x / 2^k)`.
    pub tail_ceil: u64,
    /// `census_sum + x / 2^k - V(x)`.
    pub slack: Ratio<i128>,
    /// `k * rho_k(x) + x / 2^k`.
    pub collapsed_bound: Ratio<i128>,
    /// Whether the collapsed bound also dominates `V(x)` here.
    pub collapsed_holds: bool,
    /// Whether `rho_1 <= rho_2 <= ... <= rho_k` at this `x`.
    pub rho_monotone: bool,
}

impl BoundReport {
    pub fn slack_nonnegative(&self) -> bool {
        self.slack >= Ratio::from_integer(0)
    }

    pub fn to_row(&self) -> BoundRow {
        BoundRow {
            x: self.x,
            k: self.k,
            v_count: self.v_count,
            census_sum: self.census_sum,
            tail_num: *self.tail.numer(),
            tail_den: *self.tail.denom(),
            slack_num: *self.slack.numer(),
            slack_den: *self.slack.denom(),
            collapsed_holds: self.collapsed_holds,
        }
    }
}

/// Serialized form of [`BoundReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub x: u64,
    pub k: u32,
    pub v_count: u64,
    pub census_sum: u64,
    pub tail_num: i128,
    pub tail_den: i128,
    pub slack_num: i128,
    pub slack_den: i128,
    pub collapsed_holds: bool,
}

pub fn bound_chain(
    x: u64,
    k: u32,
    table: &SieveTable,
    image: &TotientImage,
) -> Result<BoundReport> {
    if image.x() != x {
        return Err(Error::Domain(format!(
            "image was built for x = {}, not {x}",
            image.x()
        )));
    }
    if k == 0 || k > MAX_BOUND_K {
        return Err(Error::Domain(format!("k must be in 1..={MAX_BOUND_K}")));
    }
    let rho = rho_table(x, k, table)?;
    let census_sum = rho.cumulative(k);
    let tail = Ratio::new(x as i128, 1i128 << k);
    // x >= 1 and x < 2^64, so the ceiling is 1 once 2^k exceeds x
    let tail_ceil = if k >= 64 { 1 } else { x.div_ceil(1u64 << k) };
    let v = Ratio::from_integer(image.count() as i128);
    let slack = Ratio::from_integer(census_sum as i128) + tail - v;
    let collapsed_bound = Ratio::from_integer(k as i128 * rho.rho(k) as i128) + tail;
    let rho_monotone = rho.counts.windows(2).all(|w| w[0] <= w[1]);
    Ok(BoundReport {
        x,
        k,
        v_count: image.count(),
        census_sum,
        tail,
        tail_ceil,
        slack,
        collapsed_bound,
        collapsed_holds: collapsed_bound >= v,
        rho_monotone,
    })
}

/// `rho_k(x) (k-1)! ln x / (x (ln ln x)^(k-1))`, bounded in `x` for fixed `k`.
pub fn rho_ratio(x: u64, k: u32, table: &SieveTable) -> Result<f64> {
    if x < 16 {
        return Err(Error::Domain(format!("rho_ratio needs x >= 16, got {x}")));
    }
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let rho = rho_table(x, k, table)?.rho(k);
    if rho == 0 {
        return Ok(0.0);
    }
    let xf = x as f64;
    let lnx = xf.ln();
    let lnlnx = lnx.ln();
    // (k-1)! / (ln ln x)^(k-1) as a running product
    let scale: f64 = (1..k).map(|j| j as f64 / lnlnx).product();
    Ok(rho as f64 * scale * lnx / xf)
}
