//! Times table construction: `cargo run --release --example sieve_timing -- 100000000`
use std::time::Instant;

fn main() {
    let limit: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10_000_000);
    let started = Instant::now();
    let table = totient_density::build_sieve(limit).expect("sieve fits the memory ceiling");
    println!(
        "limit {limit}: {} primes in {:.2?}",
        table.primes().len(),
        started.elapsed()
    );
}
