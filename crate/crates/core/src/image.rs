//! Exact enumeration of the totient image `V = { phi(n) : n >= 1 }` below a bound.
//!
//! Enumerating `V ∩ [1, x]` needs every `n` with `phi(n) <= x`, so the scan
//! over `n` must stop at a certified preimage limit `N`. Two bounds are
//! available:
//!
//! * [`PreimageBound::Elementary`]: `phi(n) >= sqrt(n / 2)` for all `n`, so
//!   `phi(n) <= x` forces `n <= 2x^2`.
//! * [`PreimageBound::Refined`]: `n / phi(n) < e^γ ln ln n + 3 / ln ln n`
//!   for `n >= 3` (Rosser and Schoenfeld). The right side grows like
//!   `ln ln n`, so the limit is only a small multiple of `x`.
//!
//! [`certified_preimage_limit`] takes the smaller of the two.

use bitvec::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sieve::SieveTable;

/// `exp(γ)`, γ the Euler–Mascheroni constant.
const EXP_GAMMA: f64 = 1.781_072_417_990_197_9;

/// Floor applied to the refined preimage limit. Above 100 the refined bound
/// is increasing, which the fixed-point argument relies on.
const REFINED_FLOOR: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreimageBound {
    Elementary,
    Refined,
}

/// Upper bound on `n / phi(n)` valid for `n >= 3`.
fn rosser_schoenfeld(n: f64) -> f64 {
    let t = n.ln().ln();
    EXP_GAMMA * t + 3.0 / t
}

/// Returns `N` such that every `n` with `phi(n) <= x` satisfies `n <= N`.
pub fn preimage_limit_for(x: u64, bound: PreimageBound) -> u64 {
    assert!(x >= 1, "x must be positive");
    match bound {
        PreimageBound::Elementary => 2 * x * x,
        PreimageBound::Refined => refined_limit(x),
    }
}

/// The smaller of the two certified preimage limits.
pub fn certified_preimage_limit(x: u64) -> u64 {
    preimage_limit_for(x, PreimageBound::Elementary)
        .min(preimage_limit_for(x, PreimageBound::Refined))
}

/// Fixed point of `n = x * h(n)` with `h` the Rosser–Schoenfeld bound.
///
/// For `n >= max(100, x)` the map `n - x h(n)` is increasing, so once
/// `N >= x h(N)` every `n >= N` has `phi(n) > n / h(n) >= x`.
fn refined_limit(x: u64) -> u64 {
    let xf = x as f64;
    let start = xf.max(REFINED_FLOOR as f64);
    let mut n = xf * rosser_schoenfeld(start);
    for _ in 0..200 {
        let next = xf * rosser_schoenfeld(n);
        let done = (next - n).abs() < 0.25;
        n = next.max(n);
        if done {
            break;
        }
    }
    let mut limit = ((n * (1.0 + 1e-12)).ceil() as u64 + 1).max(REFINED_FLOOR);
    while (limit as f64) < xf * rosser_schoenfeld(limit as f64) {
        limit += 1 + limit / 1_000_000;
    }
    limit
}

/// Membership bitmap of `V ∩ [1, x]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotientImage {
    x: u64,
    members: BitVec<u64, Lsb0>,
    count: u64,
    preimage_limit: u64,
}

impl TotientImage {
    pub fn x(&self) -> u64 {
        self.x
    }

    /// `V(x)`.
    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn preimage_limit(&self) -> u64 {
        self.preimage_limit
    }

    pub fn contains(&self, v: u64) -> bool {
        v >= 1 && v <= self.x && self.members[v as usize]
    }

    /// Members in increasing order.
    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter_ones().map(|i| i as u64)
    }
}

/// `V ∩ [1, x]`, scanning `n` up to [`certified_preimage_limit`].
pub fn totient_image_up_to(x: u64, table: &SieveTable) -> Result<TotientImage> {
    totient_image_with_limit(x, table, certified_preimage_limit(x))
}

/// `{ phi(n) : n <= preimage_limit } ∩ [1, x]`.
///
/// Complete only when `preimage_limit` is a certified bound for `x`; larger
/// limits give the same image.
pub fn totient_image_with_limit(
    x: u64,
    table: &SieveTable,
    preimage_limit: u64,
) -> Result<TotientImage> {
    if x == 0 {
        return Err(Error::Domain("x must be at least 1".into()));
    }
    if table.limit() < preimage_limit {
        return Err(Error::Incomplete {
            x,
            required: preimage_limit,
            have: table.limit(),
        });
    }
    let mut members = bitvec![u64, Lsb0; 0; x as usize + 1];
    for &v in &table.phi_slice()[1..=preimage_limit as usize] {
        if v as u64 <= x {
            members.set(v as usize, true);
        }
    }
    let count = members.count_ones() as u64;
    Ok(TotientImage {
        x,
        members,
        count,
        preimage_limit,
    })
}

/// `V(x)`, the number of totient values in `[1, x]`.
pub fn v_count(x: u64, table: &SieveTable) -> Result<u64> {
    totient_image_up_to(x, table).map(|image| image.count())
}

/// Smallest `n` with `phi(n) = m`, or `None` if `m` is a nontotient.
pub fn is_totient(m: u64, table: &SieveTable) -> Result<Option<u64>> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let limit = certified_preimage_limit(m);
    if table.limit() < limit {
        return Err(Error::Incomplete {
            x: m,
            required: limit,
            have: table.limit(),
        });
    }
    Ok(table.phi_slice()[1..=limit as usize]
        .iter()
        .position(|&v| v as u64 == m)
        .map(|i| i as u64 + 1))
}

/// Two consecutive members of `V` and their distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GapRecord {
    pub lower: u64,
    pub upper: u64,
    pub gap: u64,
}

/// One record per consecutive pair of members, in increasing order.
pub fn gaps(image: &TotientImage) -> Vec<GapRecord> {
    let mut members = image.members();
    let Some(mut lower) = members.next() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for upper in members {
        out.push(GapRecord {
            lower,
            upper,
            gap: upper - lower,
        });
        lower = upper;
    }
    out
}

/// Gaps strictly larger than every earlier gap.
pub fn record_gaps(image: &TotientImage) -> Vec<GapRecord> {
    let mut best = 0;
    gaps(image)
        .into_iter()
        .filter(|g| {
            let record = g.gap > best;
            best = best.max(g.gap);
            record
        })
        .collect()
}

/// JSON report for an image: `{x, v_count, preimage_limit, records}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImageReport {
    pub x: u64,
    pub v_count: u64,
    pub preimage_limit: u64,
    pub records: Vec<GapRecord>,
}

impl ImageReport {
    pub fn new(image: &TotientImage) -> Self {
        ImageReport {
            x: image.x(),
            v_count: image.count(),
            preimage_limit: image.preimage_limit(),
            records: record_gaps(image),
        }
    }
}
