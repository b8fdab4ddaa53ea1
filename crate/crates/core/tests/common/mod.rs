#![allow(dead_code)]

use num_bigint::BigInt;
use polyspace::{is_generic, ExponentVector, LengthVector, Rational};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

pub fn config(cases: u32, seed: u64) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        max_global_rejects: 100_000,
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Entries `p/q` with `p ∈ [1, 40]`, `q ∈ [1, 8]`.
pub fn small_rational() -> impl Strategy<Value = Rational> {
    (1i64..=40, 1i64..=8).prop_map(|(p, q)| rational(p, q))
}

pub fn generic_lengths(m: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = LengthVector> {
    m.prop_flat_map(|m| prop::collection::vec(small_rational(), m))
        .prop_map(|v| LengthVector::new(v).unwrap())
        .prop_filter("generic", is_generic)
}

/// A uniformly chosen composition of `total` into `parts` nonnegative parts.
pub fn composition(total: usize, parts: usize) -> impl Strategy<Value = ExponentVector> {
    prop::collection::vec(0..parts, total).prop_map(move |slots| {
        let mut k = vec![0u32; parts];
        for s in slots {
            k[s] += 1;
        }
        ExponentVector::new(k)
    })
}

pub fn generic_query(m: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (LengthVector, ExponentVector)> {
    generic_lengths(m).prop_flat_map(|a| {
        let m = a.len();
        (Just(a), composition(m - 3, m))
    })
}
