//! Seeded random generic queries.
//!
//! Lengths are `p/q` with `p ∈ [1, 40]` and `q ∈ [1, 8]`, redrawn until the
//! vector is generic. Exponents place `m − 3` units into uniformly chosen
//! slots. Everything flows from one ChaCha8 stream, so a seed pins the cases.

use num_bigint::BigInt;
use polyspace::{is_generic, ExponentVector, LengthVector, PairingQuery, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// An independent stream for the `index`-th consumer of `seed`.
    pub fn stream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index + 1);
        Sampler { rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn rational(&mut self) -> Rational {
        let p: i64 = self.rng.random_range(1..=40);
        let q: i64 = self.rng.random_range(1..=8);
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn generic_lengths(&mut self, m: usize) -> LengthVector {
        loop {
            let entries = (0..m).map(|_| self.rational()).collect();
            let alpha = LengthVector::new(entries).expect("sampled lengths are positive");
            if is_generic(&alpha) {
                return alpha;
            }
        }
    }

    pub fn exponents(&mut self, m: usize) -> ExponentVector {
        let mut k = vec![0u32; m];
        for _ in 0..m.saturating_sub(3) {
            k[self.rng.random_range(0..m)] += 1;
        }
        ExponentVector::new(k)
    }

    pub fn query(&mut self, min_m: usize, max_m: usize) -> PairingQuery {
        let m = self.rng.random_range(min_m..=max_m);
        let alpha = self.generic_lengths(m);
        let k = self.exponents(m);
        PairingQuery::new(alpha, k).expect("sampled queries are admissible")
    }

    /// A uniformly random permutation of `0..n`.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, self.rng.random_range(0..=i));
        }
        order
    }
}

/// The first `count` queries drawn from `seed`.
pub fn random_queries(seed: u64, count: usize, min_m: usize, max_m: usize) -> Vec<PairingQuery> {
    let mut sampler = Sampler::new(seed);
    (0..count).map(|_| sampler.query(min_m, max_m)).collect()
}
