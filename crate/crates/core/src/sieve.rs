//! Linear sieve for the smallest prime factor, Euler's totient, the Möbius
//! function and the distinct-prime-factor count over `1..=N`.
//!
//! Every composite `n` is visited exactly once, as `n = i * p` with `p` the
//! smallest prime factor of `n`. At that moment the values at `i` are final,
//! so the multiplicative functions are extended in place:
//!
//! | case        | `phi(n)`           | `mobius(n)`     | `omega(n)`      |
//! |-------------|--------------------|-----------------|-----------------|
//! | `p` ∤ `i`   | `phi(i) * (p - 1)` | `-mobius(i)`    | `omega(i) + 1`  |
//! | `p` \| `i`  | `phi(i) * p`       | `0`             | `omega(i)`      |
//!
//! Storage is `4 + 4 + 1 + 1 = 10` bytes per entry ([`BYTES_PER_ENTRY`]) plus
//! the prime list, so `N = 10^8` needs roughly 1 GB.

use crate::error::{Error, Result};

/// Bytes of table storage per integer in `1..=N`.
pub const BYTES_PER_ENTRY: u64 = 10;

/// Default ceiling on the estimated table footprint: 8 GiB.
pub const DEFAULT_MEMORY_CEILING: u64 = 8 << 30;

/// Largest supported limit; `spf` and `phi` are stored as `u32`.
pub const MAX_LIMIT: u64 = u32::MAX as u64 - 1;

/// Immutable arithmetic-function tables over `1..=limit`.
///
/// Index 0 is padding and never exposed. After construction the table is
/// plain data, so it is `Send + Sync` and can be shared behind an `Arc`.
#[derive(Clone, PartialEq, Eq)]
pub struct SieveTable {
    limit: u32,
    spf: Vec<u32>,
    phi: Vec<u32>,
    mobius: Vec<i8>,
    omega: Vec<u8>,
    primes: Vec<u32>,
}

impl std::fmt::Debug for SieveTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SieveTable")
            .field("limit", &self.limit)
            .field("primes", &self.primes.len())
            .finish()
    }
}

/// Prime factorization `n = p1^a1 * ... * pk^ak` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Multiplies the factors back together.
    pub fn product(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }
}

/// Estimated peak footprint in bytes of a table with the given limit.
pub fn estimated_bytes(limit: u64) -> u64 {
    let entries = limit + 1;
    // pi(x) < 1.25506 x / ln x for x > 1
    let prime_bound = if limit < 17 {
        limit
    } else {
        (1.25506 * limit as f64 / (limit as f64).ln()).ceil() as u64
    };
    entries * BYTES_PER_ENTRY + prime_bound * 4
}

/// Builds the table with the default 8 GiB memory ceiling.
pub fn build_sieve(limit: u64) -> Result<SieveTable> {
    SieveTable::build(limit)
}

impl SieveTable {
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with_ceiling(limit, DEFAULT_MEMORY_CEILING)
    }

    pub fn build_with_ceiling(limit: u64, ceiling: u64) -> Result<Self> {
        check_limit(limit, ceiling)?;
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut phi = vec![0u32; n + 1];
        let mut mobius = vec![0i8; n + 1];
        let mut omega = vec![0u8; n + 1];
        let mut primes: Vec<u32> = Vec::new();

        spf[1] = 1;
        phi[1] = 1;
        mobius[1] = 1;

        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                phi[i] = i as u32 - 1;
                mobius[i] = -1;
                omega[i] = 1;
                primes.push(i as u32);
            }
            let (spf_i, phi_i, mu_i, om_i) = (spf[i], phi[i], mobius[i], omega[i]);
            for &p in &primes {
                if p > spf_i {
                    break;
                }
                let m = i * p as usize;
                if m > n {
                    break;
                }
                spf[m] = p;
                if p == spf_i {
                    phi[m] = phi_i * p;
                    mobius[m] = 0;
                    omega[m] = om_i;
                } else {
                    phi[m] = phi_i * (p - 1);
                    mobius[m] = -mu_i;
                    omega[m] = om_i + 1;
                }
            }
        }

        Ok(SieveTable {
            limit: limit as u32,
            spf,
            phi,
            mobius,
            omega,
            primes,
        })
    }

    /// Reassembles a table from raw arrays (index 0 is padding). The prime
    /// list is recovered from `spf`. Callers are responsible for the arrays
    /// being a genuine sieve; the cache loader verifies a checksum first.
    pub(crate) fn from_parts(spf: Vec<u32>, phi: Vec<u32>, mobius: Vec<i8>, omega: Vec<u8>) -> Self {
        let limit = spf.len() as u32 - 1;
        let primes = (2..=limit).filter(|&n| spf[n as usize] == n).collect();
        SieveTable {
            limit,
            spf,
            phi,
            mobius,
            omega,
            primes,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit as u64
    }

    fn index(&self, what: &'static str, n: u64) -> Result<usize> {
        if n == 0 || n > self.limit as u64 {
            return Err(Error::OutOfRange {
                what,
                value: n,
                limit: self.limit as u64,
            });
        }
        Ok(n as usize)
    }

    /// Smallest prime factor, with `spf(1) = 1`.
    pub fn spf(&self, n: u64) -> Result<u64> {
        self.index("n", n).map(|i| self.spf[i] as u64)
    }

    pub fn phi(&self, n: u64) -> Result<u64> {
        self.index("n", n).map(|i| self.phi[i] as u64)
    }

    pub fn mobius(&self, n: u64) -> Result<i8> {
        self.index("n", n).map(|i| self.mobius[i])
    }

    pub fn omega(&self, n: u64) -> Result<u8> {
        self.index("n", n).map(|i| self.omega[i])
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit as u64 && self.spf[n as usize] as u64 == n
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Primes `p <= x`; `x` may exceed the limit, in which case all primes are returned.
    pub fn primes_up_to(&self, x: u64) -> &[u32] {
        let end = self.primes.partition_point(|&p| p as u64 <= x);
        &self.primes[..end]
    }

    /// Raw arrays indexed by `n`; element 0 is padding.
    pub fn spf_slice(&self) -> &[u32] {
        &self.spf
    }

    pub fn phi_slice(&self) -> &[u32] {
        &self.phi
    }

    pub fn mobius_slice(&self) -> &[i8] {
        &self.mobius
    }

    pub fn omega_slice(&self) -> &[u8] {
        &self.omega
    }

    /// Factorizes `n` by repeated division by the smallest prime factor.
    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        let mut m = self.index("n", n)?;
        let mut factors: Vec<(u64, u32)> = Vec::new();
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p as u64, e));
        }
        Ok(Factorization { n, factors })
    }

    /// Number of `1 <= j <= x` with `gcd(j, m) = 1`, as `sum_{d | m} mu(d) * floor(x / d)`.
    ///
    /// Only squarefree divisors contribute, so the sum runs over the
    /// `2^omega(m)` subsets of the prime factors of `m`.
    pub fn coprime_count(&self, x: u64, m: u64) -> Result<u64> {
        let primes: Vec<u64> = self.factorize(m)?.primes().collect();
        let mut total: i128 = 0;
        for mask in 0u32..(1 << primes.len()) {
            let mut d = 1u64;
            for (bit, &p) in primes.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    d *= p;
                }
            }
            let term = (x / d) as i128;
            if mask.count_ones() % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        Ok(total as u64)
    }

    /// Recomputes `phi(n) = n * prod_{p | n} (p - 1) / p` in exact integers and
    /// compares it with the sieved value.
    pub fn euler_product_check(&self, n: u64) -> Result<bool> {
        let f = self.factorize(n)?;
        let product = f.primes().fold(n, |acc, p| acc * (p - 1) / p);
        Ok(product == self.phi[n as usize] as u64)
    }
}

pub fn factorize(table: &SieveTable, n: u64) -> Result<Factorization> {
    table.factorize(n)
}

pub fn coprime_count(x: u64, m: u64, table: &SieveTable) -> Result<u64> {
    table.coprime_count(x, m)
}

pub fn euler_product_check(table: &SieveTable, n: u64) -> Result<bool> {
    table.euler_product_check(n)
}

fn check_limit(limit: u64, ceiling: u64) -> Result<()> {
    if limit == 0 {
        return Err(Error::ZeroLimit);
    }
    if limit > MAX_LIMIT {
        return Err(Error::LimitTooLarge {
            limit,
            max: MAX_LIMIT,
        });
    }
    let required = estimated_bytes(limit);
    if required > ceiling {
        return Err(Error::MemoryCeiling {
            limit,
            required,
            ceiling,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }

    #[test]
    fn conventions_at_one() {
        let t = build_sieve(1).unwrap();
        assert_eq!(t.phi(1).unwrap(), 1);
        assert_eq!(t.mobius(1).unwrap(), 1);
        assert_eq!(t.omega(1).unwrap(), 0);
        assert_eq!(t.spf(1).unwrap(), 1);
        assert!(t.primes().is_empty());
    }

    #[test]
    fn small_values() {
        let t = build_sieve(30).unwrap();
        assert_eq!(t.phi(30).unwrap(), 8);
        assert_eq!(t.mobius(30).unwrap(), -1);
        assert_eq!(t.omega(30).unwrap(), 3);
        assert_eq!(build_sieve(13).unwrap().phi(13).unwrap(), 12);
    }

    #[test]
    fn rejects_bad_limits() {
        assert!(matches!(build_sieve(0), Err(Error::ZeroLimit)));
        let err = SieveTable::build_with_ceiling(1_000_000, 1 << 20).unwrap_err();
        match err {
            Error::MemoryCeiling { ceiling, .. } => assert_eq!(ceiling, 1 << 20),
            other => panic!("unexpected {other:?}"),
        }
        let msg = SieveTable::build_with_ceiling(1_000_000, 12345)
            .unwrap_err()
            .to_string();
        assert!(msg.contains("12345"), "{msg}");
        assert!(matches!(
            build_sieve(MAX_LIMIT + 1),
            Err(Error::LimitTooLarge { .. })
        ));
    }

    #[test]
    fn factorize_examples() {
        let t = build_sieve(100).unwrap();
        assert!(t.factorize(1).unwrap().factors.is_empty());
        assert_eq!(t.factorize(12).unwrap().factors, vec![(2, 2), (3, 1)]);
        assert_eq!(t.factorize(97).unwrap().factors, vec![(97, 1)]);
        assert!(matches!(t.factorize(0), Err(Error::OutOfRange { .. })));
        assert!(matches!(t.factorize(101), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn coprime_count_examples() {
        let t = build_sieve(100).unwrap();
        assert_eq!(t.coprime_count(17, 1).unwrap(), 17);
        assert_eq!(t.coprime_count(10, 10).unwrap(), 4);
        assert_eq!(t.coprime_count(10, 10).unwrap(), t.phi(10).unwrap());
        assert_eq!(t.coprime_count(20, 6).unwrap(), 7);
        assert!(t.coprime_count(20, 101).is_err());
        // x beyond the table is fine, only m must be in range
        assert_eq!(t.coprime_count(1000, 2).unwrap(), 500);
    }

    #[test]
    fn euler_product_examples() {
        let t = build_sieve(1 << 20).unwrap();
        assert!(t.euler_product_check(1).unwrap());
        assert!(t.euler_product_check(10).unwrap());
        assert!(t.euler_product_check(1 << 20).unwrap());
        assert_eq!(t.phi(1 << 20).unwrap(), 1 << 19);
    }

    #[test]
    fn phi_matches_gcd_scan() {
        let t = build_sieve(10_000).unwrap();
        for n in 1..=10_000u64 {
            let direct = (1..=n).filter(|&j| gcd(j, n) == 1).count() as u64;
            assert_eq!(t.phi(n).unwrap(), direct, "n = {n}");
        }
    }

    #[test]
    fn mobius_and_gauss_divisor_sums() {
        const N: usize = 100_000;
        let t = build_sieve(N as u64).unwrap();
        let mut mu_sum = vec![0i64; N + 1];
        let mut phi_sum = vec![0u64; N + 1];
        for d in 1..=N {
            let (mu, phi) = (t.mobius_slice()[d] as i64, t.phi_slice()[d] as u64);
            for m in (d..=N).step_by(d) {
                mu_sum[m] += mu;
                phi_sum[m] += phi;
            }
        }
        for n in 1..=N {
            assert_eq!(mu_sum[n], (n == 1) as i64, "mobius sum at {n}");
            assert_eq!(phi_sum[n], n as u64, "gauss sum at {n}");
        }
    }

    #[test]
    fn coprime_count_exhaustive() {
        let t = build_sieve(300).unwrap();
        for m in 1..=300u64 {
            let mut running = 0;
            for x in 1..=10_000u64 {
                if gcd(x, m) == 1 {
                    running += 1;
                }
                assert_eq!(t.coprime_count(x, m).unwrap(), running, "x={x} m={m}");
            }
        }
    }

    #[test]
    fn table_invariants() {
        let t = build_sieve(50_000).unwrap();
        for n in 2..=50_000u64 {
            let p = t.spf(n).unwrap();
            assert!(t.is_prime(p));
            assert_eq!(n % p, 0);
            assert!((2..p).all(|q| n % q != 0 || !t.is_prime(q)));
            assert!((t.omega(n).unwrap() as f64) <= (n as f64).log2());
            if t.is_prime(n) {
                assert_eq!(t.phi(n).unwrap(), n - 1);
                assert_eq!(t.mobius(n).unwrap(), -1);
                assert_eq!(t.omega(n).unwrap(), 1);
            }
            assert_eq!(t.factorize(n).unwrap().product(), n);
            assert_eq!(
                t.factorize(n).unwrap().factors.len(),
                t.omega(n).unwrap() as usize
            );
        }
    }

    #[test]
    fn table_is_send_and_sync() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<SieveTable>();
        let t = std::sync::Arc::new(build_sieve(1000).unwrap());
        let handles: Vec<_> = (0..4)
            .map(|i| {
                let t = t.clone();
                std::thread::spawn(move || t.phi(997 - i).unwrap())
            })
            .collect();
        for h in handles {
            assert!(h.join().unwrap() > 0);
        }
    }
}
