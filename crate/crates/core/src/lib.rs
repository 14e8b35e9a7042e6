//! Computational checks around the density of the Euler totient image.
//!
//! The crate builds arithmetic-function tables with a linear sieve
//! ([`sieve`]), enumerates the set of totient values below a bound exactly
//! ([`image`]), counts integers by their number of distinct prime factors
//! and checks the resulting upper bound for `V(x)` in exact arithmetic
//! ([`census`]), verifies the supporting analytic estimates numerically
//! ([`analytic`]), and solves for the best exponent of `ln x` in that bound
//! ([`optimizer`]). [`verify`] bundles all of it into one property suite.
//!
//! ```
//! use totient_density::{image, sieve};
//!
//! let table = sieve::build_sieve(image::certified_preimage_limit(100)).unwrap();
//! assert_eq!(image::v_count(100, &table).unwrap(), 38);
//! ```

pub mod analytic;
pub mod cache;
pub mod census;
mod error;
pub mod image;
pub mod numeric;
pub mod optimizer;
pub mod sieve;
pub mod verify;

pub use error::{Error, Result};
pub use sieve::{build_sieve, SieveTable};

// The guide's code samples run as doctests so they cannot drift from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/sieve.md")]
    struct Sieve;
    #[doc = include_str!("../../../book/src/totient-image.md")]
    struct TotientImage;
    #[doc = include_str!("../../../book/src/census.md")]
    struct Census;
    #[doc = include_str!("../../../book/src/analytic.md")]
    struct Analytic;
    #[doc = include_str!("../../../book/src/exponent.md")]
    struct Exponent;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
