//! Property checks on the pairing and volume: symmetries, chamber stability,
//! scaling, empty spaces and agreement between independent formulas.

mod common;

use common::{config, generic_lengths, generic_query, rational, small_rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use polyspace::{
    chamber_data, count_negative_subsets, enumerate_triangular_with, is_empty, is_generic,
    pairing_explicit, pairing_recursive_with_shift, volume_exact, volume_mixed_partial, Engine,
    Execution, ExponentVector, LengthVector, PairingQuery, Rational,
};
use proptest::prelude::*;

fn explicit(a: &LengthVector, k: &ExponentVector) -> BigInt {
    pairing_explicit(&PairingQuery::new(a.clone(), k.clone()).unwrap()).value
}

proptest! {
    #![proptest_config(config(128, 11))]

    #[test]
    fn permutation_invariance(
        (a, k) in generic_query(4..=8),
        order in Just((0..8).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let order: Vec<usize> = order.into_iter().filter(|&i| i < a.len()).collect();
        let q = PairingQuery::new(a.clone(), k.clone()).unwrap();
        prop_assert_eq!(explicit(&a.permuted(&order), &k.permuted(&order)), pairing_explicit(&q).value);
    }

    #[test]
    fn square_exchange_invariance((a, k) in generic_query(5..=8), pick in any::<prop::sample::Index>()) {
        let entries = k.entries().to_vec();
        let squares: Vec<usize> = (0..entries.len()).filter(|&i| entries[i] >= 2).collect();
        prop_assume!(!squares.is_empty());
        let i = squares[pick.index(squares.len())];
        let base = explicit(&a, &k);
        for j in (0..entries.len()).filter(|&j| j != i) {
            let mut moved = entries.clone();
            moved[i] -= 2;
            moved[j] += 2;
            prop_assert_eq!(explicit(&a, &ExponentVector::new(moved)), base.clone());
        }
    }

    #[test]
    fn chamber_invariance((a, k) in generic_query(4..=8), steps in prop::collection::vec(-99i64..=99, 8)) {
        let m = a.len();
        // Also bounded by the shortest side so every length stays positive.
        let radius = chamber_data(&a).radius;
        let reach = a.entries().iter().min().unwrap().min(&radius).clone();
        // |δ_i| · m ≤ (99/100) · radius < radius
        let nudged: Vec<Rational> = a
            .entries()
            .iter()
            .zip(&steps)
            .map(|(x, &t)| x + &reach * rational(t, 100 * m as i64))
            .collect();
        let b = LengthVector::new(nudged).unwrap();
        prop_assert!(is_generic(&b));
        prop_assert_eq!(explicit(&b, &k), explicit(&a, &k));
    }

    #[test]
    fn scaling_invariance((a, k) in generic_query(4..=8), lambda in small_rational()) {
        let b = a.scaled(&lambda).unwrap();
        prop_assert_eq!(explicit(&b, &k), explicit(&a, &k));
        let m = a.len() as i32;
        prop_assert_eq!(volume_exact(&b).unwrap(), volume_exact(&a).unwrap() * lambda.pow(m - 3));
    }

    #[test]
    fn empty_spaces_pair_to_zero(
        (a, k) in generic_query(4..=8),
        slack in small_rational(),
        pick in any::<prop::sample::Index>(),
    ) {
        let mut entries = a.into_entries();
        let i = pick.index(entries.len());
        let others: Rational = entries.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x).sum();
        entries[i] = others + slack;
        let b = LengthVector::new(entries).unwrap();
        prop_assert!(is_empty(&b) && is_generic(&b));
        let q = PairingQuery::new(b.clone(), k).unwrap();
        for engine in Engine::ALL {
            prop_assert!(q.evaluate(engine).unwrap().value.is_zero());
        }
        prop_assert!(volume_exact(&b).unwrap().is_zero());
    }

    #[test]
    fn four_engines_agree((a, k) in generic_query(4..=10)) {
        let q = PairingQuery::new(a, k).unwrap();
        let values: Vec<BigInt> = Engine::ALL.iter().map(|&e| q.evaluate(e).unwrap().value).collect();
        prop_assert!(values.windows(2).all(|w| w[0] == w[1]), "{:?}", values);
    }

    #[test]
    fn recursion_ignores_the_tie_breaking_nudge((a, k) in generic_query(4..=7), n in 1i64..=9) {
        // Force a tie in the last two lengths so the nudge is actually used.
        let mut entries = a.into_entries();
        let m = entries.len();
        entries[m - 1] = entries[m - 2].clone();
        let b = LengthVector::new(entries).unwrap();
        prop_assume!(is_generic(&b));
        let q = PairingQuery::new(b, k).unwrap();
        let reference = pairing_explicit(&q).value;
        for shift in [rational(n, 10), rational(-n, 10)] {
            match pairing_recursive_with_shift(&q, &shift) {
                Ok(r) => prop_assert_eq!(r.value, reference.clone()),
                Err(polyspace::Error::Range(_)) => {}
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }
}

proptest! {
    #![proptest_config(config(50, 23))]

    #[test]
    fn volume_derivative_is_the_pairing((a, k) in generic_query(3..=7)) {
        let q = PairingQuery::new(a.clone(), k.clone()).unwrap();
        let expected = Rational::from_integer(pairing_explicit(&q).value);
        prop_assert_eq!(volume_mixed_partial(&a, &k).unwrap(), expected);
    }

    #[test]
    fn volume_is_positive_exactly_on_nonempty_spaces(
        a in generic_lengths(3..=8),
        order in Just((0..8).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let v = volume_exact(&a).unwrap();
        prop_assert_eq!(v.is_positive(), !is_empty(&a));
        prop_assert!(!v.is_negative());
        let order: Vec<usize> = order.into_iter().filter(|&i| i < a.len()).collect();
        prop_assert_eq!(volume_exact(&a.permuted(&order)).unwrap(), v);
    }

    #[test]
    fn generic_vectors_have_half_their_subsets_negative(a in generic_lengths(3..=12)) {
        prop_assert_eq!(count_negative_subsets(&a).unwrap(), 1u64 << (a.len() - 1));
    }

    #[test]
    fn enumeration_does_not_depend_on_execution(a in generic_lengths(12..=18)) {
        let seq = enumerate_triangular_with(&a, Execution::Sequential).unwrap();
        let par = enumerate_triangular_with(&a, Execution::Parallel).unwrap();
        prop_assert_eq!(seq, par);
    }
}
