//! Chunked Gray-code walks over subset masks with exact signed sums.
//!
//! Every hot loop in the crate has the same shape: visit all `2^n` subsets
//! `J` of some index set and look at `base + Σ_{i∈J} v_i − Σ_{i∉J} v_i`.
//! Lengths are rescaled by the lcm of their denominators so the walk runs
//! over integers. When the scaled total fits comfortably in an `i128` the
//! walk uses machine integers, otherwise it falls back to `BigInt`. Both
//! paths are exact.
//!
//! The mask space is split into contiguous chunks of `2^CHUNK_BITS` masks
//! that share their high bits. Each chunk is seeded from scratch and then
//! walked in Gray-code order, so one add or subtract per visited subset.
//! Chunk results come back in chunk order regardless of how many workers
//! ran them, which keeps every reduction deterministic.

use std::ops::{AddAssign, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::lengths::Rational;

const CHUNK_BITS: u32 = 12;

/// Scaled totals up to this bound use the `i128` lane.
const SMALL_LANE_LIMIT_BITS: u64 = 120;

pub(crate) trait Lane:
    Clone
    + Ord
    + Zero
    + Send
    + Sync
    + std::fmt::Debug
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    fn to_bigint(&self) -> BigInt;
    fn abs_value(&self) -> Self;
}

impl Lane for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn abs_value(&self) -> Self {
        self.abs()
    }
}

impl Lane for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn abs_value(&self) -> Self {
        self.abs()
    }
}

pub(crate) enum Lanes {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

/// A list of positive rationals written as integers over a common denominator.
pub(crate) struct Scaled {
    pub denom: BigInt,
    pub lanes: Lanes,
}

impl Scaled {
    pub fn new(values: &[Rational]) -> Self {
        let denom = values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ints: Vec<BigInt> = values
            .iter()
            .map(|v| v.numer() * (&denom / v.denom()))
            .collect();
        let total: BigInt = ints.iter().map(|v| v.abs()).sum();
        let lanes = if total.bits() <= SMALL_LANE_LIMIT_BITS {
            Lanes::Small(ints.iter().map(|v| v.to_i128().unwrap()).collect())
        } else {
            Lanes::Big(ints)
        };
        Scaled { denom, lanes }
    }

    pub fn to_rational(&self, scaled: BigInt) -> Rational {
        Rational::new(scaled, self.denom.clone())
    }
}

/// Runs `$body` with `$vals` bound to the lane slice of a [`Scaled`].
macro_rules! with_lanes {
    ($scaled:expr, $vals:ident => $body:expr) => {
        match &$scaled.lanes {
            $crate::walk::Lanes::Small(v) => {
                let $vals: &[i128] = v.as_slice();
                $body
            }
            $crate::walk::Lanes::Big(v) => {
                let $vals: &[num_bigint::BigInt] = v.as_slice();
                $body
            }
        }
    };
}
pub(crate) use with_lanes;

/// How a subset walk distributes its chunks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    /// One chunk after another on the calling thread.
    Sequential,
    /// Chunks spread over the current rayon pool. Identical to
    /// `Sequential` when the `parallel` feature is off.
    #[default]
    Parallel,
}

/// One chunk of a subset walk: every mask whose bits above `low_bits` equal `high`.
pub(crate) struct ChunkWalk<'a, T> {
    vals: &'a [T],
    twice: &'a [T],
    base: &'a T,
    high: u64,
    low_bits: u32,
}

impl<T: Lane> ChunkWalk<'_, T> {
    /// Calls `f(mask, sum)` for every mask in the chunk, in Gray-code order.
    pub fn for_each(self, mut f: impl FnMut(u64, &T)) {
        let mut sum = self.base.clone();
        for (i, v) in self.vals.iter().enumerate() {
            if self.high >> i & 1 == 1 {
                sum += v;
            } else {
                sum -= v;
            }
        }
        let mut mask = self.high;
        f(mask, &sum);
        for step in 1u64..(1u64 << self.low_bits) {
            let bit = step.trailing_zeros() as usize;
            mask ^= 1 << bit;
            if mask >> bit & 1 == 1 {
                sum += &self.twice[bit];
            } else {
                sum -= &self.twice[bit];
            }
            f(mask, &sum);
        }
    }
}

/// Walks all `2^vals.len()` masks, handing each chunk to `per_chunk`.
///
/// The returned vector holds one result per chunk in increasing mask order.
pub(crate) fn walk_chunks<T, A, F>(vals: &[T], base: &T, exec: Execution, per_chunk: F) -> Vec<A>
where
    T: Lane,
    A: Send,
    F: Fn(ChunkWalk<'_, T>) -> A + Sync,
{
    let n = vals.len() as u32;
    assert!(n < 64, "subset walk over {n} bits");
    let low_bits = n.min(CHUNK_BITS);
    let chunks = 1u64 << (n - low_bits);
    let twice: Vec<T> = vals
        .iter()
        .map(|v| {
            let mut t = v.clone();
            t += v;
            t
        })
        .collect();
    let run = |c: u64| {
        per_chunk(ChunkWalk {
            vals,
            twice: &twice,
            base,
            high: c << low_bits,
            low_bits,
        })
    };
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel if chunks > 1 => {
            use rayon::prelude::*;
            (0..chunks).into_par_iter().map(run).collect()
        }
        _ => (0..chunks).map(run).collect(),
    }
}
