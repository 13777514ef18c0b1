use num_traits::Zero;
use proptest::prelude::*;
use wittenlab_core::combinatorics::{double_factorial, factorial};
use wittenlab_core::psi::{exponent_multisets, stable_keys, CorrelatorCache, CorrelatorKey};
use wittenlab_core::rational::{big, int, ratio};
use wittenlab_core::Rational;

fn multinomial_genus0(exps: &[u32]) -> Rational {
    // (n-3)! / ∏ k_i!, computed without the library helpers
    let n = exps.len() as u32;
    let den: num_bigint::BigInt = exps.iter().map(|&k| factorial(k)).product();
    Rational::new(factorial(n - 3), den)
}

#[test]
fn genus_zero_matches_multinomial_up_to_nine_points() {
    let mut cache = CorrelatorCache::new();
    for n in 3..=9usize {
        for e in exponent_multisets(n, n as u32 - 3) {
            if e.iter().sum::<u32>() != n as u32 - 3 {
                continue;
            }
            assert_eq!(cache.correlator_of(0, &e), multinomial_genus0(&e), "{e:?}");
        }
    }
}

#[test]
fn one_point_values() {
    let mut cache = CorrelatorCache::new();
    for g in 1..=3u32 {
        let expected = Rational::new(1.into(), num_bigint::BigInt::from(24).pow(g) * factorial(g));
        assert_eq!(cache.correlator_of(g, &[3 * g - 2]), expected);
    }
}

#[test]
fn known_two_and_three_point_values() {
    let mut cache = CorrelatorCache::new();
    assert_eq!(cache.correlator_of(2, &[3, 2]), ratio(29, 5760));
    assert_eq!(cache.correlator_of(2, &[2, 2, 2]), ratio(7, 240));
    assert_eq!(cache.correlator_of(1, &[1, 1]), ratio(1, 24));
    assert_eq!(cache.correlator_of(3, &[7]), ratio(1, 82944));
}

#[test]
fn string_and_dilaton_for_all_small_keys() {
    let mut cache = CorrelatorCache::new();
    for key in stable_keys(2, 7) {
        let e = key.exponents().to_vec();
        let g = key.genus();
        if let Some(pos) = e.iter().position(|&k| k == 0) {
            let mut rest = e.clone();
            rest.remove(pos);
            if 2 * g as i64 - 2 + rest.len() as i64 > 0 {
                let mut sum = Rational::zero();
                for j in 0..rest.len() {
                    if rest[j] > 0 {
                        let mut lowered = rest.clone();
                        lowered[j] -= 1;
                        sum += cache.correlator_of(g, &lowered);
                    }
                }
                assert_eq!(cache.correlator(&key), sum, "string at {key}");
            }
        }
        if let Some(pos) = e.iter().position(|&k| k == 1) {
            let mut rest = e.clone();
            rest.remove(pos);
            if 2 * g as i64 - 2 + rest.len() as i64 > 0 {
                let factor = int(2 * g as i64 - 2 + rest.len() as i64);
                assert_eq!(cache.correlator(&key), factor * cache.correlator_of(g, &rest), "dilaton at {key}");
            }
        }
    }
}

#[test]
fn sharp_form_agrees_with_recursion() {
    let mut cache = CorrelatorCache::new();
    for key in stable_keys(2, 5) {
        if key.exponents().iter().all(|&k| k == 0) {
            continue;
        }
        let rep = cache.sharp_vs_star(&key).unwrap();
        assert!(rep.holds(), "{key}: {rep:?}");
    }
}

#[test]
fn cache_verifies_against_cold_recompute() {
    let mut cache = CorrelatorCache::new();
    for key in stable_keys(2, 4) {
        cache.correlator(&key);
    }
    assert!(cache.verify().is_none());
}

#[test]
fn double_factorial_conventions() {
    assert_eq!(double_factorial(-1).unwrap(), 1.into());
    assert_eq!(double_factorial(0).unwrap(), 1.into());
    assert_eq!(double_factorial(7).unwrap(), 105.into());
    assert!(double_factorial(-3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nondimensional_keys_vanish(g in 0u32..3, exps in proptest::collection::vec(0u32..6, 1..5)) {
        let key = CorrelatorKey::new(g, exps.clone());
        let mut cache = CorrelatorCache::new();
        if !key.is_dimensional() {
            prop_assert!(cache.correlator(&key).is_zero());
        } else if key.is_stable() {
            prop_assert!(cache.correlator(&key) > Rational::zero());
        }
    }

    #[test]
    fn order_of_exponents_is_irrelevant(g in 0u32..3, mut exps in proptest::collection::vec(0u32..5, 1..5)) {
        let mut cache = CorrelatorCache::new();
        let a = cache.correlator_of(g, &exps);
        exps.reverse();
        prop_assert_eq!(a, cache.correlator_of(g, &exps));
    }

    #[test]
    fn odd_double_factorial_recurrence(k in 0i64..30) {
        let lhs = double_factorial(2 * k + 1).unwrap();
        let rhs = double_factorial(2 * k - 1).unwrap() * (2 * k + 1);
        prop_assert_eq!(big(lhs), big(rhs));
    }
}
