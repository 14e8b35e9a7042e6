//! Values frozen from independent runs (trial division and a numpy sieve)
//! made before the library existed.

use totient_density::analytic::prime_pi;
use totient_density::census::{rho_ratio, rho_table};
use totient_density::image::{
    certified_preimage_limit, is_totient, record_gaps, totient_image_up_to, v_count, GapRecord,
};
use totient_density::build_sieve;

const V_AT_POWERS: [(u64, u64); 6] = [
    (10, 6),
    (100, 38),
    (1_000, 291),
    (10_000, 2_374),
    (100_000, 20_254),
    (1_000_000, 180_184),
];

const RECORDS_TO_1E4: [(u64, u64); 7] = [
    (1, 2),
    (2, 4),
    (12, 16),
    (72, 78),
    (240, 250),
    (864, 876),
    (4032, 4048),
];

#[test]
fn v_counts() {
    let table = build_sieve(certified_preimage_limit(1_000_000)).unwrap();
    for (x, v) in V_AT_POWERS {
        assert_eq!(v_count(x, &table).unwrap(), v, "V({x})");
    }
    assert_eq!(v_count(1, &table).unwrap(), 1);
}

#[test]
fn records_to_ten_thousand() {
    let table = build_sieve(certified_preimage_limit(10_000)).unwrap();
    let image = totient_image_up_to(10_000, &table).unwrap();
    let want: Vec<GapRecord> = RECORDS_TO_1E4
        .iter()
        .map(|&(lower, upper)| GapRecord { lower, upper, gap: upper - lower })
        .collect();
    assert_eq!(record_gaps(&image), want);
}

#[test]
fn minimal_witnesses() {
    let table = build_sieve(certified_preimage_limit(1000)).unwrap();
    let witnesses: Vec<_> = (1..=20).map(|m| is_totient(m, &table).unwrap()).collect();
    let want = [
        Some(1), Some(3), None, Some(5), None, Some(7), None, Some(15), None, Some(11),
        None, Some(13), None, None, None, Some(17), None, Some(19), None, Some(25),
    ];
    assert_eq!(witnesses, want);
    assert_eq!(is_totient(1000, &table).unwrap(), Some(1111));
}

#[test]
fn prime_counts() {
    let table = build_sieve(10_000_000).unwrap();
    assert_eq!(prime_pi(1_000_000, &table).unwrap(), 78_498);
    assert_eq!(prime_pi(10_000_000, &table).unwrap(), 664_579);
}

#[test]
fn omega_census() {
    let table = build_sieve(1_000_000).unwrap();
    assert_eq!(
        rho_table(10_000, 6, &table).unwrap().counts,
        vec![1280, 4097, 3695, 894, 33, 0]
    );
    assert_eq!(
        rho_table(1_000_000, 8, &table).unwrap().counts,
        vec![78_734, 288_726, 379_720, 208_034, 42_492, 2_285, 8, 0]
    );
}

#[test]
fn factorial_normalized_ratios() {
    let table = build_sieve(1_000_000).unwrap();
    let r = |x, k| rho_ratio(x, k, &table).unwrap();
    assert!((r(1_000_000, 1) - 1.087750408270759).abs() < 1e-12);
    assert!((r(10_000, 2) - 1.699513981264559).abs() < 1e-12);
    assert!((r(1_000_000, 2) - 1.5191215569550551).abs() < 1e-12);
    // bounded trend between the two scales
    assert!((r(10_000, 2) - r(1_000_000, 2)).abs() / r(1_000_000, 2) < 0.5);
}
