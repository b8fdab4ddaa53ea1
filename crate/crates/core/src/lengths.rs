//! Side-length vectors, exponent vectors, genericity and chamber data.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::walk::{walk_chunks, with_lanes, Execution, Lane, Scaled};

/// Exact rational scalar. Always reduced with a positive denominator.
pub type Rational = BigRational;

/// Parses `"p"` or `"p/q"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse {
        what: "rational",
        literal: s.to_string(),
    };
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// The side lengths `(α_1, …, α_m)` of a polygon, `m ≥ 3`, all strictly positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LengthVector(Vec<Rational>);

impl LengthVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if entries.len() < 3 {
            return Err(Error::TooFewLengths(entries.len()));
        }
        if let Some((index, value)) = entries.iter().enumerate().find(|(_, v)| !v.is_positive()) {
            return Err(Error::NonPositiveLength {
                index: index + 1,
                value: value.to_string(),
            });
        }
        Ok(LengthVector(entries))
    }

    pub fn from_integers(entries: &[i64]) -> Result<Self> {
        Self::new(
            entries
                .iter()
                .map(|&v| Rational::from_integer(v.into()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    /// Multiplies every entry by `factor`, which must be positive.
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        Self::new(self.0.iter().map(|v| v * factor).collect())
    }

    /// Entry `i` of the result is entry `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        LengthVector(order.iter().map(|&i| self.0[i].clone()).collect())
    }

    pub fn require_generic(&self) -> Result<()> {
        match find_degeneracy(self) {
            Some(signs) => Err(Error::NonGeneric { signs }),
            None => Ok(()),
        }
    }
}

impl std::ops::Index<usize> for LengthVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl FromStr for LengthVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        LengthVector::new(entries)
    }
}

impl fmt::Display for LengthVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_csv(f, &self.0)
    }
}

/// The multidegree `(k_1, …, k_m)` of a pairing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Self {
        ExponentVector(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&k| k as usize).sum()
    }

    pub fn permuted(&self, order: &[usize]) -> Self {
        ExponentVector(order.iter().map(|&i| self.0[i]).collect())
    }

    /// Bitmask of the positions carrying an odd exponent.
    pub(crate) fn odd_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &k)| k % 2 == 1)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    /// Checks the entry count against `m` and the total degree against `m - 3`.
    pub fn check_admissible(&self, m: usize) -> Result<()> {
        if self.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                got: self.len(),
            });
        }
        let expected = m.saturating_sub(3);
        if self.degree() != expected {
            return Err(Error::DegreeMismatch {
                expected,
                got: self.degree(),
            });
        }
        Ok(())
    }
}

impl FromStr for ExponentVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|t| {
                t.trim().parse::<u32>().map_err(|_| Error::Parse {
                    what: "exponent",
                    literal: t.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(ExponentVector)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_csv(f, &self.0)
    }
}

fn write_csv<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, v) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

/// A choice of signs `ε_i ∈ {+1, −1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub(crate) fn from_entries(entries: Vec<i8>) -> Self {
        SignVector(entries)
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn apply(&self, alpha: &LengthVector) -> Rational {
        self.0
            .iter()
            .zip(alpha.entries())
            .map(|(&e, a)| if e > 0 { a.clone() } else { -a })
            .sum()
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, &e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if e > 0 { "+1" } else { "-1" })?;
        }
        f.write_str(")")
    }
}

/// Distance of a length vector from the nearest wall `Σ ε_i α_i = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberData {
    pub radius: Rational,
    pub empty: bool,
}

impl ChamberData {
    pub fn is_generic(&self) -> bool {
        self.radius.is_positive()
    }
}

/// Smallest `|Σ ε_i α_i|` together with a sign vector attaining it.
///
/// Only sign vectors with `ε_m = +1` are scanned; the global flip covers the rest.
/// Ties go to the smallest mask so the witness does not depend on partitioning.
fn closest_wall(alpha: &LengthVector, exec: Execution) -> (Rational, SignVector) {
    let m = alpha.len();
    let scaled = Scaled::new(alpha.entries());
    let (value, mask) = with_lanes!(scaled, vals => {
        let (head, last) = vals.split_at(m - 1);
        let best = walk_chunks(head, &last[0], exec, |walk| {
            let mut best: Option<(_, u64)> = None;
            walk.for_each(|mask, s| {
                let a = s.abs_value();
                match &best {
                    Some((b, bm)) if (b, *bm) <= (&a, mask) => {}
                    _ => best = Some((a, mask)),
                }
            });
            best.expect("chunks are never empty")
        })
        .into_iter()
        .min()
        .expect("at least one chunk");
        (best.0.to_bigint(), best.1)
    });
    let signs = (0..m)
        .map(|i| if i == m - 1 || mask >> i & 1 == 1 { 1 } else { -1 })
        .collect();
    (scaled.to_rational(value), SignVector(signs))
}

/// The sign vector of a vanishing signed sum, if one exists.
pub fn find_degeneracy(alpha: &LengthVector) -> Option<SignVector> {
    let (radius, signs) = closest_wall(alpha, Execution::default());
    radius.is_zero().then_some(signs)
}

pub fn is_generic(alpha: &LengthVector) -> bool {
    find_degeneracy(alpha).is_none()
}

pub fn chamber_data(alpha: &LengthVector) -> ChamberData {
    chamber_data_with(alpha, Execution::default())
}

pub fn chamber_data_with(alpha: &LengthVector, exec: Execution) -> ChamberData {
    ChamberData {
        radius: closest_wall(alpha, exec).0,
        empty: is_empty(alpha),
    }
}

/// True when the longest side exceeds the sum of the others, so no polygon closes up.
pub fn is_empty(alpha: &LengthVector) -> bool {
    let total: Rational = alpha.entries().iter().sum();
    alpha.entries().iter().any(|a| a + a > total)
}

/// Non-strict triangle inequalities for the triple `(a, b, c)`.
pub fn triple_ok(a: &Rational, b: &Rational, c: &Rational) -> bool {
    a <= &(b + c) && b <= &(a + c) && c <= &(a + b)
}
