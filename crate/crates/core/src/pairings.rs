//! Intersection pairings `∫_{M(α)} c_1^{k_1} ⋯ c_m^{k_m}` from triangular subsets.
//!
//! The closed formula needs every zero exponent ahead of the positive ones,
//! so queries are first reordered by a stable permutation of the steps. The
//! pairing is invariant under simultaneous permutation of `α` and `k`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lengths::{ExponentVector, LengthVector};
use crate::triangular::triangular_parity_sum;
use crate::walk::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Engine {
    /// Signed count over the triangular family.
    Explicit,
    /// Two-term recursion on the number of steps.
    Recursion,
    /// Signed count over all negative subsets.
    KonnoTakakura,
    /// Signed count of `sgn(S_R)` over all subsets.
    Yoshida,
}

impl Engine {
    pub const ALL: [Engine; 4] = [
        Engine::Explicit,
        Engine::Recursion,
        Engine::KonnoTakakura,
        Engine::Yoshida,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Explicit => "explicit",
            Engine::Recursion => "recursion",
            Engine::KonnoTakakura => "kt",
            Engine::Yoshida => "yoshida",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Engine::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Parse {
                what: "engine",
                literal: s.to_string(),
            })
    }
}

/// A validated pairing request: matching lengths, total degree `m − 3`, generic `α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingQuery {
    alpha: LengthVector,
    k: ExponentVector,
}

impl PairingQuery {
    pub fn new(alpha: LengthVector, k: ExponentVector) -> Result<Self> {
        k.check_admissible(alpha.len())?;
        alpha.require_generic()?;
        Ok(PairingQuery { alpha, k })
    }

    pub fn alpha(&self) -> &LengthVector {
        &self.alpha
    }

    pub fn exponents(&self) -> &ExponentVector {
        &self.k
    }

    pub fn m(&self) -> usize {
        self.alpha.len()
    }

    /// Applies `order` to both vectors; entry `i` of the result is entry `order[i]`.
    /// A permuted valid query is valid, so no re-check happens.
    pub fn permuted(&self, order: &[usize]) -> PairingQuery {
        PairingQuery {
            alpha: self.alpha.permuted(order),
            k: self.k.permuted(order),
        }
    }

    pub fn evaluate(&self, engine: Engine) -> Result<PairingResult> {
        match engine {
            Engine::Explicit => Ok(pairing_explicit(self)),
            Engine::Recursion => crate::oracles::pairing_recursive(self),
            Engine::KonnoTakakura => crate::oracles::pairing_konno_takakura(self),
            Engine::Yoshida => crate::oracles::pairing_yoshida(self),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingResult {
    pub value: BigInt,
    pub engine: Engine,
    /// Entry `i` is the original position moved to position `i` before evaluation.
    pub permutation: Vec<usize>,
}

/// A query reordered so that all zero exponents come first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub query: PairingQuery,
    pub permutation: Vec<usize>,
}

/// Stable reorder putting every `k_i = 0` ahead of every `k_i > 0`.
pub fn normalize(q: &PairingQuery) -> Normalized {
    let mut order: Vec<usize> = (0..q.m()).collect();
    order.sort_by_key(|&i| q.k.entries()[i] > 0);
    Normalized {
        query: q.permuted(&order),
        permutation: order,
    }
}

/// `Σ_{J∈T(α')} (−1)^{Σ_{i∈I∖J} k'_i + m − |J|}` on the normalised query `(α', k')`.
pub fn pairing_explicit(q: &PairingQuery) -> PairingResult {
    let Normalized { query, permutation } = normalize(q);
    let m = query.m();
    // Positions 1 and 2 carry exponent 0 after normalising, so the odd
    // exponents all live in I = {3..m}.
    let odd = query.k.odd_mask() >> 2;
    let parity_sum = triangular_parity_sum(&query.alpha, odd, Execution::default())
        .expect("valid queries fit the subset mask");
    let sign = if (odd.count_ones() as usize + m) % 2 == 0 { 1 } else { -1 };
    PairingResult {
        value: BigInt::from(sign * parity_sum),
        engine: Engine::Explicit,
        permutation,
    }
}

/// All compositions of `total` into `parts` nonnegative parts, lexicographic order.
pub fn compositions(total: usize, parts: usize) -> Vec<ExponentVector> {
    fn rec(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
        if parts == 1 {
            prefix.push(total);
            out.push(ExponentVector::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(total as u32, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// Every multidegree of total degree `m − 3` with its pairing.
pub fn pairing_table(alpha: &LengthVector) -> Result<BTreeMap<ExponentVector, BigInt>> {
    alpha.require_generic()?;
    let m = alpha.len();
    let queries: Vec<PairingQuery> = compositions(m - 3, m)
        .into_iter()
        .map(|k| PairingQuery {
            alpha: alpha.clone(),
            k,
        })
        .collect();
    let eval = |q: &PairingQuery| (q.k.clone(), pairing_explicit(q).value);
    #[cfg(feature = "parallel")]
    let rows: Vec<_> = {
        use rayon::prelude::*;
        queries.par_iter().map(eval).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<_> = queries.iter().map(eval).collect();
    Ok(rows.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(s: &str) -> LengthVector {
        s.parse().unwrap()
    }

    fn ev(s: &str) -> ExponentVector {
        s.parse().unwrap()
    }

    fn query(a: &str, k: &str) -> Result<PairingQuery> {
        PairingQuery::new(lv(a), ev(k))
    }

    fn value(a: &str, k: &str) -> i64 {
        i64::try_from(pairing_explicit(&query(a, k).unwrap()).value).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let q = PairingQuery::new(lv("4,3,4,3,4"), ev("2,0,0,0,0")).unwrap();
        let n = normalize(&q);
        assert_eq!(n.query.alpha(), &lv("3,4,3,4,4"));
        assert_eq!(n.query.exponents(), &ev("0,0,0,0,2"));
        assert_eq!(n.permutation, vec![1, 2, 3, 4, 0]);

        let q = PairingQuery::new(lv("4,3,4,3,4"), ev("0,0,0,1,1")).unwrap();
        assert_eq!(normalize(&q).permutation, vec![0, 1, 2, 3, 4]);

        let q = PairingQuery::new(lv("1,1,1,2"), ev("1,0,0,0")).unwrap();
        let n = normalize(&q);
        assert_eq!(n.query.alpha(), &lv("1,1,2,1"));
        assert_eq!(n.query.exponents(), &ev("0,0,0,1"));
    }

    #[test]
    fn explicit_examples() {
        assert_eq!(value("4,3,4,3,4", "0,0,0,0,2"), -3);
        assert_eq!(value("4,3,4,3,4", "0,0,0,1,1"), 1);
        assert_eq!(value("1,1,1,2", "0,0,0,1"), -1);
        assert_eq!(value("4,3,11", "0,0,0"), 0);
        assert_eq!(value("1,1,1", "0,0,0"), 1);
        for m in 5..=9usize {
            let mut a = vec![format!("1/{}", m - 2); m - 3];
            a.extend(["1", "1", "1"].map(String::from));
            let mut k = vec!["1"; m - 3];
            k.extend(["0", "0", "0"]);
            assert_eq!(value(&a.join(","), &k.join(",")), 1 << (m - 3));
        }
    }

    #[test]
    fn explicit_m4_base_cases() {
        // The four possible shapes of T(α) at m = 4 and their values.
        assert_eq!(value("4,3,7/2,1/2", "0,0,0,1"), 2); // T = {{3},{3,4}}
        assert_eq!(value("9,10,1,7/2", "0,0,0,1"), 0); // T = {{4},{3,4}}
        assert_eq!(value("5,6,12,8", "0,0,0,1"), 1); // T = {{3}}
        assert_eq!(value("7,3/2,1,5", "0,0,0,1"), 1); // T = {{3,4}}
        assert_eq!(value("7,9/2,3,10", "0,0,0,1"), -1); // T = {{4}}
    }

    #[test]
    fn rejects_invalid_queries() {
        assert!(matches!(query("1,1,1,1", "0,0,0,1"), Err(Error::NonGeneric { .. })));
        assert_eq!(
            query("4,3,4,3,4", "0,0,0,1,2"),
            Err(Error::DegreeMismatch { expected: 2, got: 3 })
        );
        assert!(matches!(query("4,3,4,3,4", "0,0,2"), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn table_of_the_pentagon() {
        let t = pairing_table(&lv("4,3,4,3,4")).unwrap();
        assert_eq!(t.len(), 15);
        for (k, v) in &t {
            let expected = if k.entries().contains(&2) { -3 } else { 1 };
            assert_eq!(*v, BigInt::from(expected), "{k}");
        }
    }

    #[test]
    fn table_of_an_empty_space_is_zero() {
        let t = pairing_table(&lv("1,1,1,5")).unwrap();
        assert!(t.values().all(|v| *v == BigInt::from(0)));
        assert_eq!(t.len(), 4);
    }

    #[test]
    fn compositions_are_lexicographic_and_complete() {
        let c = compositions(2, 3);
        let s: Vec<String> = c.iter().map(|k| k.to_string()).collect();
        assert_eq!(s, ["0,0,2", "0,1,1", "0,2,0", "1,0,1", "1,1,0", "2,0,0"]);
        assert_eq!(compositions(6, 9).len(), 3003);
        assert_eq!(compositions(0, 3).len(), 1);
    }

    #[test]
    fn engine_names_round_trip() {
        for e in Engine::ALL {
            assert_eq!(e.name().parse::<Engine>().unwrap(), e);
        }
        assert!("all".parse::<Engine>().is_err());
    }
}
