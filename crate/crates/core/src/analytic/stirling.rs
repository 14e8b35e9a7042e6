//! `ln n! = n ln n - n + ln sqrt(n) + c + O(1/n)`, with `c` estimated from
//! the exact left side.

use serde::Serialize;

use crate::numeric::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StirlingReport {
    pub n: u64,
    pub ln_factorial: f64,
    /// `n ln n - n + ln sqrt(n)`
    pub main_term: f64,
    /// `ln_factorial - main_term`
    pub c_estimate: f64,
}

fn report(n: u64, ln_factorial: &CompensatedSum) -> StirlingReport {
    let nf = n as f64;
    let ln_n = nf.ln();
    let pieces = [nf * ln_n, -nf, 0.5 * ln_n];
    let main_term: CompensatedSum = pieces.into_iter().collect();
    // fold the subtraction into the compensated sum to keep the low bits
    let mut c = *ln_factorial;
    pieces.iter().for_each(|&v| c.add(-v));
    StirlingReport {
        n,
        ln_factorial: ln_factorial.value(),
        main_term: main_term.value(),
        c_estimate: c.value(),
    }
}

pub fn stirling_eval(n: u64) -> StirlingReport {
    stirling_grid(&[n])[0]
}

/// Reports at each `n` of the grid from one running sum of `ln m`.
pub fn stirling_grid(grid: &[u64]) -> Vec<StirlingReport> {
    assert!(grid.iter().all(|&n| n >= 1), "n must be positive");
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by_key(|&i| grid[i]);
    let mut out = vec![None; grid.len()];
    let mut acc = CompensatedSum::new();
    let mut m = 1u64;
    for i in order {
        while m < grid[i] {
            m += 1;
            acc.add((m as f64).ln());
        }
        out[i] = Some(report(grid[i], &acc));
    }
    out.into_iter().map(Option::unwrap).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_one() {
        let r = stirling_eval(1);
        assert_eq!(r.ln_factorial, 0.0);
        assert_eq!(r.main_term, -1.0);
        assert_eq!(r.c_estimate, 1.0);
    }

    #[test]
    fn small_factorials() {
        let r = stirling_eval(10);
        assert!((r.ln_factorial - 3_628_800f64.ln()).abs() < 1e-13);
        let grid = stirling_grid(&[20, 5, 10]);
        assert_eq!(grid[2], r);
        assert_eq!(grid[1], stirling_eval(5));
    }

    #[test]
    fn estimates_decrease_towards_the_limit() {
        // c_estimate(n) ≈ c + 1/(12n) from above
        let grid = stirling_grid(&[10, 100, 1000, 10_000]);
        assert!(grid.windows(2).all(|w| w[0].c_estimate > w[1].c_estimate));
    }
}
