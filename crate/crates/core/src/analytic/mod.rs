//! Numerical checks of the analytic lemmas: Abel summation, Mertens' sums,
//! the prime-power formula for `rho_1`, and Stirling's expansion.

mod abel;
mod mertens;
mod stirling;

pub use abel::{abel_check, AbelInput, IntegralMode};
pub use mertens::{mertens_grid, mertens_sums, prime_pi, rho1_formula_check, MertensReport};
pub use stirling::{stirling_eval, stirling_grid, StirlingReport};
