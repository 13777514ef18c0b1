use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use wittenlab_core::combinatorics::factorial;
use wittenlab_core::cutjoin::cut_join_balance;
use wittenlab_core::hodge::{extract_hodge_table, genus_one_context, lambda1_closed_form, HodgeKey};
use wittenlab_core::hurwitz::{
    connected_disconnected_transform, cutjoin_hurwitz_check, single_hurwitz, HurwitzTable, TransformDirection,
};
use wittenlab_core::psi::CorrelatorCache;
use wittenlab_core::rational::{big, int, powi, ratio};
use wittenlab_core::theorem::{default_chi_min, theorem1_check};
use wittenlab_core::{Partition, Rational};

fn p(v: &[u32]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

#[test]
fn brute_force_equals_character_formula() {
    let brute = HurwitzTable::build_bruteforce(5, 6, false).unwrap();
    let frob = HurwitzTable::build_frobenius(5, 6).unwrap();
    assert_eq!(brute, frob);
}

#[test]
fn connected_reference_values() {
    assert_eq!(single_hurwitz(0, &p(&[1, 1, 1])).unwrap(), int(4));
    assert_eq!(single_hurwitz(0, &p(&[1, 1])).unwrap(), ratio(1, 2));
    assert_eq!(single_hurwitz(1, &p(&[2])).unwrap(), ratio(1, 2));
}

#[test]
fn transform_round_trip() {
    let conn = HurwitzTable::build_bruteforce(4, 5, true).unwrap();
    let disc = connected_disconnected_transform(&conn, TransformDirection::Exp).unwrap();
    assert_eq!(disc, HurwitzTable::build_bruteforce(4, 5, false).unwrap());
    let back = connected_disconnected_transform(&disc, TransformDirection::Log).unwrap();
    assert_eq!(back, conn);
}

/// Hurwitz's genus-zero formula, independent of the Hodge machinery.
fn genus_zero_hurwitz(mu: &Partition) -> Rational {
    let d = mu.size() as i64;
    let r = d + mu.len() as i64 - 2;
    big(factorial(r as u32)) * mu.hurwitz_weight() * powi(&int(d), mu.len() as i64 - 3) / big(mu.aut_order())
}

#[test]
fn elsv_genus_zero() {
    let mut ctx = genus_one_context(3).unwrap();
    for d in 3..=5 {
        for mu in Partition::all_of_size(d) {
            if mu.len() < 3 {
                continue;
            }
            let h = single_hurwitz(0, &mu).unwrap();
            assert_eq!(h, genus_zero_hurwitz(&mu), "{mu}");
            assert_eq!(ctx.elsv_rhs(0, &mu).unwrap(), h, "{mu}");
        }
    }
}

#[test]
fn lambda_free_part_matches_psi_expansion() {
    let mut ctx = genus_one_context(3).unwrap();
    let mut psi = CorrelatorCache::new();
    for w in [vec![int(1), int(2), int(3)], vec![ratio(1, 2), int(3), int(1), ratio(2, 5)]] {
        let n = w.len();
        let dim = n as u32 - 3;
        let mut direct = Rational::zero();
        for b in wittenlab_core::hodge::compositions(dim, n) {
            let mono: Rational = w.iter().zip(&b).map(|(x, &k)| powi(x, k as i64)).product();
            direct += mono * psi.correlator_of(0, &b);
        }
        assert_eq!(ctx.hodge_rational_integral(0, &w).unwrap(), direct);
    }
}

#[test]
fn genus_one_extraction() {
    let mut psi = CorrelatorCache::new();
    let rep = extract_hodge_table(&mut psi, 1, 4, 5, true).unwrap();
    assert!(rep.consistent());
    assert_eq!(rep.rank, rep.unknowns.len());
    assert!(rep.equations > rep.rank);
    assert_eq!(rep.table.get(&HodgeKey::new(1, vec![0], 1)), Some(&ratio(1, 24)));
    for k in &rep.unknowns {
        assert_eq!(rep.table.get(k), Some(&lambda1_closed_form(k.exponents())), "{k}");
    }
}

#[test]
fn cut_and_join_through_hodge_integrals() {
    let mut ctx = genus_one_context(4).unwrap();
    for g in 0..=1u32 {
        for d in 1..=4 {
            for mu in Partition::all_of_size(d) {
                if 2 * g as i64 - 2 + mu.len() as i64 <= 0 {
                    continue;
                }
                let bal = cut_join_balance(&mut ctx, g, &mu).unwrap();
                assert!(bal.holds(), "g={g} mu={mu}: {} vs {}", bal.lhs, bal.rhs());
            }
        }
    }
}

#[test]
fn cut_and_join_through_hurwitz_numbers() {
    for (g, mu) in [(0, p(&[1, 1, 1])), (0, p(&[2, 1])), (1, p(&[1])), (1, p(&[2]))] {
        let bal = cutjoin_hurwitz_check(g, &mu).unwrap();
        assert!(bal.holds(), "g={g} mu={mu}");
    }
}

#[test]
fn low_coefficients_of_the_series_vanish() {
    let mut ctx = genus_one_context(3).unwrap();
    for mu in [p(&[1]), p(&[2]), p(&[1, 1])] {
        for e in [Partition::empty(), p(&[1])] {
            let rep = theorem1_check(&mut ctx, &mu, &e, default_chi_min(&mu)).unwrap();
            assert!(rep.holds(), "mu={mu} e={e}: {:?}", rep.rows);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn class_sizes_sum_to_group_order(d in 1u32..9) {
        let total: Rational = Partition::all_of_size(d).iter().map(|nu| Rational::new(BigInt::one(), nu.z_order())).sum();
        prop_assert_eq!(total, Rational::one());
    }

    #[test]
    fn automorphisms_divide_length_factorial(parts in proptest::collection::vec(1u32..5, 1..7)) {
        let mu = Partition::new(parts).unwrap();
        let l = factorial(mu.len() as u32);
        prop_assert!((l % mu.aut_order()).is_zero());
    }

    #[test]
    fn cut_and_join_moves_conserve_size(parts in proptest::collection::vec(1u32..6, 1..5)) {
        let mu = Partition::new(parts).unwrap();
        for mv in wittenlab_core::combinatorics::cut_join_moves(&mu) {
            prop_assert_eq!(mv.result.size(), mu.size());
        }
    }

    #[test]
    fn hurwitz_numbers_are_symmetric(d in 1u32..5, r in 0u32..5, a in 0usize..5, b in 0usize..5) {
        let parts = Partition::all_of_size(d);
        let (nu, mu) = (&parts[a % parts.len()], &parts[b % parts.len()]);
        let k1 = wittenlab_core::hurwitz::HurwitzKey::new(nu.clone(), mu.clone(), r, false).unwrap();
        let k2 = wittenlab_core::hurwitz::HurwitzKey::new(mu.clone(), nu.clone(), r, false).unwrap();
        prop_assert_eq!(
            wittenlab_core::hurwitz::frobenius(&k1).unwrap(),
            wittenlab_core::hurwitz::frobenius(&k2).unwrap()
        );
    }
}
