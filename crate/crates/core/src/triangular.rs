//! Triangular subsets of `I = {3, …, m}` and the negative subsets of `{1, …, m}`.
//!
//! For `J ⊆ I` write `l_J = Σ_{i∈J} α_i − Σ_{i∈I∖J} α_i`. `J` is triangular
//! when `l_J > 0` and `(α_1, α_2, l_J)` satisfies the (non-strict) triangle
//! inequalities. For `R ⊆ {1, …, m}` write `S_R = Σ_{i∈R} α_i − Σ_{i∉R} α_i`;
//! `R` is negative when `S_R < 0`.
//!
//! Masks use bit `i − 3` for index `i ∈ I`, and bit `i − 1` for `i ∈ {1, …, m}`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lengths::{LengthVector, Rational, SignVector};
use crate::walk::{walk_chunks, with_lanes, Execution, Lane, Scaled};

/// Largest `|I| = m − 2` a machine-word mask can enumerate.
pub const MAX_SUBSET_BITS: usize = 62;

/// A subset `J ⊆ {3, …, m}`; bit `i − 3` set means `i ∈ J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetMask(u64);

impl SubsetMask {
    pub fn new(bits: u64, m: usize) -> Result<Self> {
        check_capacity(m)?;
        if bits >> (m - 2) != 0 {
            return Err(Error::Range(format!(
                "mask {bits:#b} has bits outside I = {{3..{m}}}"
            )));
        }
        Ok(SubsetMask(bits))
    }

    /// Builds the mask of a set of 1-based indices drawn from `{3, …, m}`.
    pub fn from_indices(indices: &[usize], m: usize) -> Result<Self> {
        check_capacity(m)?;
        let mut bits = 0u64;
        for &i in indices {
            if !(3..=m).contains(&i) {
                return Err(Error::Range(format!("index {i} is outside I = {{3..{m}}}")));
            }
            bits |= 1 << (i - 3);
        }
        Ok(SubsetMask(bits))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, index: usize) -> bool {
        index >= 3 && self.0 >> (index - 3) & 1 == 1
    }

    /// Sorted 1-based indices.
    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|b| self.0 >> b & 1 == 1).map(|b| b + 3).collect()
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_braced(f, &self.indices())
    }
}

fn write_braced(f: &mut fmt::Formatter<'_>, indices: &[usize]) -> fmt::Result {
    f.write_str("{")?;
    for (n, i) in indices.iter().enumerate() {
        if n > 0 {
            f.write_str(",")?;
        }
        write!(f, "{i}")?;
    }
    f.write_str("}")
}

fn check_capacity(m: usize) -> Result<()> {
    if m < 3 {
        return Err(Error::TooFewLengths(m));
    }
    if m - 2 > MAX_SUBSET_BITS {
        return Err(Error::Capacity {
            what: "triangular enumeration",
            needed: m - 2,
            limit: MAX_SUBSET_BITS,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularMember {
    pub mask: SubsetMask,
    pub signed_sum: Rational,
}

/// `T(α)`, listed in strictly increasing mask order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularFamily {
    pub m: usize,
    pub members: Vec<TriangularMember>,
}

impl TriangularFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn masks(&self) -> impl Iterator<Item = SubsetMask> + '_ {
        self.members.iter().map(|t| t.mask)
    }
}

impl fmt::Display for TriangularFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, t) in self.members.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", t.mask)?;
        }
        Ok(())
    }
}

/// `l_J`: `+α_i` for `i ∈ J`, `−α_i` for `i ∈ I ∖ J`.
pub fn signed_sum(alpha: &LengthVector, j: SubsetMask) -> Rational {
    alpha.entries()[2..]
        .iter()
        .enumerate()
        .map(|(b, a)| if j.0 >> b & 1 == 1 { a.clone() } else { -a })
        .sum()
}

pub fn is_triangular(alpha: &LengthVector, j: SubsetMask) -> bool {
    let l = signed_sum(alpha, j);
    l.is_positive() && crate::lengths::triple_ok(&alpha[0], &alpha[1], &l)
}

fn triangle_test<T: Lane>(a1: &T, a2: &T, l: &T) -> bool {
    let mut hi = a1.clone();
    hi += a2;
    let mut lo = a1.clone();
    lo -= a2;
    let lo = lo.abs_value();
    *l > T::zero() && *l >= lo && *l <= hi
}

pub fn enumerate_triangular(alpha: &LengthVector) -> Result<TriangularFamily> {
    enumerate_triangular_with(alpha, Execution::default())
}

pub fn enumerate_triangular_with(alpha: &LengthVector, exec: Execution) -> Result<TriangularFamily> {
    let m = alpha.len();
    check_capacity(m)?;
    let scaled = Scaled::new(alpha.entries());
    let hits: Vec<(u64, BigInt)> = with_lanes!(scaled, vals => {
        let (a1, a2, rest) = (&vals[0], &vals[1], &vals[2..]);
        walk_chunks(rest, &Zero::zero(), exec, |walk| {
            let mut found = Vec::new();
            walk.for_each(|mask, l| {
                if triangle_test(a1, a2, l) {
                    found.push((mask, l.to_bigint()));
                }
            });
            found.sort_unstable_by_key(|&(mask, _)| mask);
            found
        })
        .concat()
    });
    let members = hits
        .into_iter()
        .map(|(bits, l)| TriangularMember {
            mask: SubsetMask(bits),
            signed_sum: scaled.to_rational(l),
        })
        .collect();
    Ok(TriangularFamily { m, members })
}

/// `Σ_{J∈T(α)} (−1)^{|J ∩ odd_mask| + |J|}` without materialising `T(α)`.
///
/// `odd_mask` is over `I`; callers fold in any sign that does not depend on `J`.
pub(crate) fn triangular_parity_sum(alpha: &LengthVector, odd_mask: u64, exec: Execution) -> Result<i64> {
    check_capacity(alpha.len())?;
    let scaled = Scaled::new(alpha.entries());
    let partial: Vec<i64> = with_lanes!(scaled, vals => {
        let (a1, a2, rest) = (&vals[0], &vals[1], &vals[2..]);
        walk_chunks(rest, &Zero::zero(), exec, |walk| {
            let mut total = 0i64;
            walk.for_each(|mask, l| {
                if triangle_test(a1, a2, l) {
                    let parity = (mask & odd_mask).count_ones() + mask.count_ones();
                    total += if parity % 2 == 0 { 1 } else { -1 };
                }
            });
            total
        })
    });
    Ok(partial.into_iter().sum())
}

/// A subset `R ⊆ {1, …, m}`; bit `i − 1` set means `i ∈ R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NegativeSubset {
    pub mask: u64,
    pub size: u32,
}

impl NegativeSubset {
    pub fn indices(&self) -> Vec<usize> {
        (0..64).filter(|b| self.mask >> b & 1 == 1).map(|b| b + 1).collect()
    }
}

impl fmt::Display for NegativeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_braced(f, &self.indices())
    }
}

pub(crate) fn subset_signs_witness(m: usize, mask: u64) -> SignVector {
    let signs: Vec<i8> = (0..m).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect();
    SignVector::from_entries(signs)
}

pub(crate) fn check_full_capacity(m: usize) -> Result<()> {
    if m > 63 {
        return Err(Error::Capacity {
            what: "subset enumeration over {1..m}",
            needed: m,
            limit: 63,
        });
    }
    Ok(())
}

struct StreamState<T> {
    twice: Vec<T>,
    mask: u64,
    last: u64,
    sum: T,
    done: bool,
}

impl<T: Lane> StreamState<T> {
    fn new(vals: &[T]) -> Self {
        let mut sum = T::zero();
        for v in vals {
            sum -= v;
        }
        let twice = vals
            .iter()
            .map(|v| {
                let mut t = v.clone();
                t += v;
                t
            })
            .collect();
        StreamState {
            twice,
            mask: 0,
            last: (1u64 << vals.len()) - 1,
            sum,
            done: false,
        }
    }

    /// Current mask and the sign of its `S_R`, then steps to `mask + 1`.
    fn step(&mut self) -> Option<(u64, Ordering)> {
        if self.done {
            return None;
        }
        let out = (self.mask, self.sum.cmp(&T::zero()));
        if self.mask == self.last {
            self.done = true;
        } else {
            let ones = self.mask.trailing_ones() as usize;
            for b in 0..ones {
                self.sum -= &self.twice[b];
            }
            self.sum += &self.twice[ones];
            self.mask += 1;
        }
        Some(out)
    }
}

enum StreamLanes {
    Small(StreamState<i128>),
    Big(StreamState<BigInt>),
}

/// Streams `S(α) = {R : S_R < 0}` in increasing mask order.
///
/// Yields a single `NonGeneric` error and stops if some `S_R` vanishes.
pub struct NegativeSubsets {
    m: usize,
    state: StreamLanes,
}

impl Iterator for NegativeSubsets {
    type Item = Result<NegativeSubset>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let (mask, sign) = match &mut self.state {
                StreamLanes::Small(s) => s.step()?,
                StreamLanes::Big(s) => s.step()?,
            };
            match sign {
                Ordering::Less => {
                    return Some(Ok(NegativeSubset {
                        mask,
                        size: mask.count_ones(),
                    }))
                }
                Ordering::Equal => {
                    match &mut self.state {
                        StreamLanes::Small(s) => s.done = true,
                        StreamLanes::Big(s) => s.done = true,
                    }
                    return Some(Err(Error::NonGeneric {
                        signs: subset_signs_witness(self.m, mask),
                    }));
                }
                Ordering::Greater => {}
            }
        }
    }
}

pub fn enumerate_negative_subsets(alpha: &LengthVector) -> Result<NegativeSubsets> {
    let m = alpha.len();
    check_full_capacity(m)?;
    let scaled = Scaled::new(alpha.entries());
    let state = match &scaled.lanes {
        crate::walk::Lanes::Small(v) => StreamLanes::Small(StreamState::new(v)),
        crate::walk::Lanes::Big(v) => StreamLanes::Big(StreamState::new(v)),
    };
    Ok(NegativeSubsets { m, state })
}

/// Visits every `R ⊆ {1, …, m}` with the sign of `S_R`, chunk by chunk.
///
/// Fails with `NonGeneric` (smallest offending mask) if any `S_R` vanishes.
pub(crate) fn fold_subset_signs<A, I, V>(
    alpha: &LengthVector,
    exec: Execution,
    init: I,
    visit: V,
) -> Result<Vec<A>>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, u64, Ordering) + Sync,
{
    let m = alpha.len();
    check_full_capacity(m)?;
    let scaled = Scaled::new(alpha.entries());
    let chunks: Vec<(A, Option<u64>)> = with_lanes!(scaled, vals => {
        walk_chunks(vals, &Zero::zero(), exec, |walk| {
            let mut acc = init();
            let mut zero: Option<u64> = None;
            walk.for_each(|mask, s| {
                let sign = s.cmp(&Zero::zero());
                if sign == Ordering::Equal {
                    zero = Some(zero.map_or(mask, |z| z.min(mask)));
                }
                visit(&mut acc, mask, sign);
            });
            (acc, zero)
        })
    });
    if let Some(mask) = chunks.iter().filter_map(|c| c.1).min() {
        return Err(Error::NonGeneric {
            signs: subset_signs_witness(m, mask),
        });
    }
    Ok(chunks.into_iter().map(|c| c.0).collect())
}

/// `|S(α)|`.
pub fn count_negative_subsets(alpha: &LengthVector) -> Result<u64> {
    let counts = fold_subset_signs(
        alpha,
        Execution::default(),
        || 0u64,
        |n, _, sign| {
            if sign == Ordering::Less {
                *n += 1;
            }
        },
    )?;
    Ok(counts.into_iter().sum())
}
