//! Prime sums: `pi(x)`, Mertens' two sums and the prime-power count of `rho_1`.

use serde::Serialize;

use crate::census::rho_table;
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::sieve::SieveTable;

fn check_range(x: u64, table: &SieveTable) -> Result<()> {
    if x == 0 || x > table.limit() {
        return Err(Error::OutOfRange {
            what: "x",
            value: x,
            limit: table.limit(),
        });
    }
    Ok(())
}

/// Number of primes `<= x`.
pub fn prime_pi(x: u64, table: &SieveTable) -> Result<u64> {
    check_range(x, table)?;
    Ok(table.primes_up_to(x).len() as u64)
}

/// Checks `rho_1(x) = Σ_{p <= x} max{e : p^e <= x}` in integer arithmetic.
pub fn rho1_formula_check(x: u64, table: &SieveTable) -> Result<bool> {
    check_range(x, table)?;
    let prime_powers: u64 = table
        .primes_up_to(x)
        .iter()
        .map(|&p| {
            let p = p as u64;
            let mut e = 0;
            let mut q = p;
            while q <= x {
                e += 1;
                match q.checked_mul(p) {
                    Some(next) => q = next,
                    None => break,
                }
            }
            e
        })
        .sum();
    Ok(prime_powers == rho_table(x, 1, table)?.rho(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MertensReport {
    pub x: u64,
    /// `Σ_{p <= x} 1/p`
    pub sum_inv_p: f64,
    /// `Σ_{p <= x} ln p / p`
    pub sum_logp_over_p: f64,
    /// `sum_inv_p - ln ln x`, tends to the Meissel–Mertens constant.
    pub m_estimate: f64,
    /// `sum_logp_over_p - ln x`, bounded by Mertens' first theorem.
    pub first_residual: f64,
}

pub fn mertens_sums(x: u64, table: &SieveTable) -> Result<MertensReport> {
    Ok(mertens_grid(&[x], table)?[0])
}

/// Reports at every grid point from a single pass over the primes.
/// The grid is reported in the order given.
pub fn mertens_grid(grid: &[u64], table: &SieveTable) -> Result<Vec<MertensReport>> {
    for &x in grid {
        if x < 3 {
            return Err(Error::Domain(format!("Mertens sums need x >= 3, got {x}")));
        }
        check_range(x, table)?;
    }
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by_key(|&i| grid[i]);

    let mut reports = vec![None; grid.len()];
    let mut inv = CompensatedSum::new();
    let mut logp = CompensatedSum::new();
    let mut primes = table.primes().iter().map(|&p| p as u64).peekable();
    for i in order {
        let x = grid[i];
        while let Some(p) = primes.next_if(|&p| p <= x) {
            let pf = p as f64;
            inv.add(1.0 / pf);
            logp.add(pf.ln() / pf);
        }
        let xf = x as f64;
        reports[i] = Some(MertensReport {
            x,
            sum_inv_p: inv.value(),
            sum_logp_over_p: logp.value(),
            m_estimate: inv.value() - xf.ln().ln(),
            first_residual: logp.value() - xf.ln(),
        });
    }
    Ok(reports.into_iter().map(Option::unwrap).collect())
}
