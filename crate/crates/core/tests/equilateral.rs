//! Closed forms on equilateral spaces against the general formula, and the
//! binomial identities behind them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use polyspace::{
    alternating_binomial_convolution, compositions, equilateral_binomial_identity,
    equilateral_pairing, pairing_table, rho, sigma1_pairing, ExponentVector, LengthVector,
};

fn equilateral(m: usize) -> LengthVector {
    LengthVector::from_integers(&vec![1; m]).unwrap()
}

fn multinomial(parts: &[u32]) -> BigInt {
    let mut total = 0u32;
    let mut out = BigInt::from(1);
    for &p in parts {
        for i in 1..=p {
            total += 1;
            out = out * BigInt::from(total) / BigInt::from(i);
        }
    }
    out
}

/// Expands `σ_1^k c_m^{m−3−k}` term by term over all compositions of `k`.
fn sigma1_by_expansion(m: usize, k: usize, table: &BTreeMap<ExponentVector, BigInt>) -> BigInt {
    compositions(k, m)
        .into_iter()
        .map(|parts| {
            let mut d = parts.entries().to_vec();
            d[m - 1] += (m - 3 - k) as u32;
            multinomial(parts.entries()) * &table[&ExponentVector::new(d)]
        })
        .sum()
}

#[test]
fn closed_form_matches_the_general_formula() {
    for m in [3, 5, 7, 9] {
        let table = pairing_table(&equilateral(m)).unwrap();
        assert_eq!(table.len(), compositions(m - 3, m).len());
        for (d, value) in &table {
            assert_eq!(&equilateral_pairing(m, d).unwrap(), value, "m={m} d={d}");
        }
    }
}

#[test]
fn closed_form_depends_only_on_the_half_degrees() {
    let m = 9;
    let mut seen: BTreeMap<usize, BigInt> = BTreeMap::new();
    for d in compositions(m - 3, m) {
        let half: usize = d.entries().iter().map(|&e| e as usize / 2).sum();
        let v = equilateral_pairing(m, &d).unwrap();
        assert_eq!(seen.entry(half).or_insert_with(|| v.clone()), &v);
    }
    assert_eq!(seen.len(), 4);
}

#[test]
fn rho_is_integral_on_its_range() {
    for m in (3..=31).step_by(2) {
        for k in 0..=(m - 3) / 2 {
            assert!(rho(m, k).unwrap().is_integer(), "m={m} k={k}");
        }
    }
}

#[test]
fn alternating_convolution_holds() {
    for a in 0..=25u64 {
        for b in (1..=2 * a + 1).step_by(2) {
            let (lhs, rhs) = alternating_binomial_convolution(a, b).unwrap();
            assert_eq!(lhs, rhs, "a={a} b={b}");
        }
    }
}

#[test]
fn equilateral_identity_holds() {
    for m in (5..=15).step_by(2) {
        for k in 0..=(m - 3) / 2 {
            let (lhs, rhs) = equilateral_binomial_identity(m, k).unwrap();
            assert_eq!(lhs, rhs, "m={m} k={k}");
        }
    }
}

#[test]
fn sigma1_matches_its_expansion() {
    for m in [5, 7, 9] {
        let table = pairing_table(&equilateral(m)).unwrap();
        for k in (0..=m - 3).step_by(2) {
            assert_eq!(sigma1_pairing(m, k).unwrap(), sigma1_by_expansion(m, k, &table), "m={m} k={k}");
        }
    }
    assert_eq!(sigma1_pairing(5, 2).unwrap(), BigInt::from(5));
    assert!(!sigma1_pairing(9, 6).unwrap().is_zero());
}
