//! Symplectic volume: exact subset sum, the sine series, and mixed partials.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lengths::{chamber_data, find_degeneracy, ExponentVector, LengthVector, Rational};
use crate::oracles::binomial;
use crate::triangular::{check_full_capacity, subset_signs_witness};
use crate::walk::{walk_chunks, with_lanes, Execution, Lane, Scaled};

#[derive(Debug, Clone, PartialEq)]
pub enum VolumeResult {
    Exact(Rational),
    Numeric(SeriesEstimate),
}

/// Partial sum of the sine series and a bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEstimate {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: u64,
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// Exact volume from the signs and `(m−3)`-th powers of all `S_R`.
///
/// Even `m` sums over every `R ⊆ {1, …, m}` with weight `−(−1)^{|R|} / (4 (m−3)!)`;
/// odd `m` sums over odd `|R|` with weight `−1 / (2 (m−3)!)`.
pub fn volume_exact(alpha: &LengthVector) -> Result<Rational> {
    volume_exact_with(alpha, Execution::default())
}

pub fn volume_exact_with(alpha: &LengthVector, exec: Execution) -> Result<Rational> {
    let m = alpha.len();
    check_full_capacity(m)?;
    let power = (m - 3) as u32;
    let even_m = m % 2 == 0;
    let scaled = Scaled::new(alpha.entries());
    let chunks: Vec<(BigInt, Option<u64>)> = with_lanes!(scaled, vals => {
        walk_chunks(vals, &Zero::zero(), exec, |walk| {
            let mut acc = BigInt::zero();
            let mut zero: Option<u64> = None;
            walk.for_each(|mask, s| {
                let size = mask.count_ones();
                if !even_m && size % 2 == 0 {
                    return;
                }
                let s = s.to_bigint();
                if s.is_zero() {
                    zero = Some(zero.map_or(mask, |z| z.min(mask)));
                    return;
                }
                // sgn(S) S^n = sgn(S)^{n+1} |S|^n
                let mut term = s.abs().pow(power);
                if s.is_negative() && power % 2 == 0 {
                    term = -term;
                }
                if even_m && size % 2 == 1 {
                    acc -= term;
                } else {
                    acc += term;
                }
            });
            (acc, zero)
        })
    });
    if let Some(mask) = chunks.iter().filter_map(|c| c.1).min() {
        return Err(Error::NonGeneric {
            signs: subset_signs_witness(m, mask),
        });
    }
    let sum: BigInt = chunks.into_iter().map(|c| c.0).sum();
    let denom = factorial(m - 3) * if even_m { 4 } else { 2 } * scaled.denom.pow(power);
    Ok(-Rational::new(sum, denom))
}

/// Neumaier's compensated sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// The phase `k α mod 2` tracked exactly when `α = n / d` fits machine words.
enum Phase {
    Exact { step: i128, period: i128, at: i128, denom: f64 },
    Float(f64),
}

impl Phase {
    fn new(a: &Rational) -> Self {
        match (a.numer().to_i64(), a.denom().to_i64()) {
            (Some(n), Some(d)) => {
                let period = 2 * d as i128;
                Phase::Exact {
                    step: (n as i128).rem_euclid(period),
                    period,
                    at: 0,
                    denom: d as f64,
                }
            }
            _ => Phase::Float(a.to_f64().unwrap_or(f64::NAN)),
        }
    }

    /// Advances to the next `k` and returns `sin(k π α)`.
    fn next_sin(&mut self, k: u64) -> f64 {
        match self {
            Phase::Exact { step, period, at, denom } => {
                *at = (*at + *step) % *period;
                (PI * (*at as f64) / *denom).sin()
            }
            Phase::Float(a) => (k as f64 * PI * *a).sin(),
        }
    }
}

/// Partial sum through `terms` of `4/π^{m−2} Σ_{k≥1} Π_i sin(kπα_i) / k^{m−2}`.
///
/// Requires `m ≥ 4` and every `α_i ∈ (0, 1)`. The tail bound is
/// `4/π^s · N^{1−s}/(s−1)` with `s = m − 2`.
pub fn volume_witten_numeric(alpha: &LengthVector, terms: u64) -> Result<SeriesEstimate> {
    let m = alpha.len();
    if m < 4 {
        return Err(Error::Range(format!("the sine series needs m >= 4, got {m}")));
    }
    if terms == 0 {
        return Err(Error::Range("the sine series needs at least one term".into()));
    }
    if let Some((i, a)) = alpha.entries().iter().enumerate().find(|(_, a)| **a >= Rational::one()) {
        return Err(Error::Range(format!(
            "length {} is {a}; the sine series needs every length in (0, 1)",
            i + 1
        )));
    }
    let s = (m - 2) as i32;
    let mut phases: Vec<Phase> = alpha.entries().iter().map(Phase::new).collect();
    let mut total = CompensatedSum::default();
    for k in 1..=terms {
        let product: f64 = phases.iter_mut().map(|p| p.next_sin(k)).product();
        total.add(product / (k as f64).powi(s));
    }
    let scale = 4.0 / PI.powi(s);
    let tail = (terms as f64).powi(1 - s) / (s - 1) as f64;
    Ok(SeriesEstimate {
        value: scale * total.value(),
        tail_bound: scale * tail,
        terms,
    })
}

/// `∂^{m−3} Vol / ∂α_1^{k_1} ⋯ ∂α_m^{k_m}` by exact forward differences.
///
/// The volume is a polynomial of degree `m − 3` on each chamber, so a
/// difference stencil with step `h = radius / (2m(m−3) + 2)` recovers the
/// derivative exactly as long as every sample stays in the chamber.
pub fn volume_mixed_partial(alpha: &LengthVector, k: &ExponentVector) -> Result<Rational> {
    let m = alpha.len();
    k.check_admissible(m)?;
    let radius = chamber_data(alpha).radius;
    if radius.is_zero() {
        return Err(Error::NonGeneric {
            signs: find_degeneracy(alpha).expect("zero radius has a witness"),
        });
    }
    let h = radius / Rational::from_integer(BigInt::from(2 * m * (m - 3) + 2));
    let ks = k.entries();
    let mut offsets = vec![0u32; m];
    let mut points = Vec::new();
    loop {
        let weight: BigInt = offsets
            .iter()
            .zip(ks)
            .map(|(&o, &ki)| {
                let c = binomial(ki as i64, o as i64);
                if (ki - o) % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .product();
        let shifted: Vec<Rational> = alpha
            .entries()
            .iter()
            .zip(&offsets)
            .map(|(a, &o)| a + &h * Rational::from_integer(BigInt::from(o)))
            .collect();
        points.push((weight, LengthVector::new(shifted)?));
        // Odometer over 0 ≤ o_i ≤ k_i.
        let Some(i) = (0..m).find(|&i| offsets[i] < ks[i]) else { break };
        offsets[i] += 1;
        offsets[..i].fill(0);
    }
    let mut total = Rational::zero();
    for (weight, point) in points {
        total += Rational::from_integer(weight) * volume_exact(&point)?;
    }
    Ok(total / h.pow((m - 3) as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(s: &str) -> LengthVector {
        s.parse().unwrap()
    }

    fn int(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn exact_examples() {
        assert_eq!(volume_exact(&lv("1,1,1")).unwrap(), int(1));
        assert_eq!(volume_exact(&lv("1,1,1,2")).unwrap(), int(1));
        assert_eq!(volume_exact(&lv("4,3,11")).unwrap(), int(0));
        assert_eq!(volume_exact(&lv("1,1,1,5")).unwrap(), int(0));
    }

    #[test]
    fn exact_volume_scales_and_rejects_walls() {
        let a = lv("4,3,4,3,4");
        let v = volume_exact(&a).unwrap();
        assert!(v.is_positive());
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(volume_exact(&a.scaled(&half).unwrap()).unwrap(), v / int(4));
        assert!(matches!(volume_exact(&lv("1,1,1,1")), Err(Error::NonGeneric { .. })));
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(volume_exact_with(&lv("3,5,7,11,13,2,1/3"), exec).unwrap(), volume_exact(&lv("3,5,7,11,13,2,1/3")).unwrap());
        }
    }

    #[test]
    fn mixed_partial_examples() {
        let k = |s: &str| s.parse::<ExponentVector>().unwrap();
        assert_eq!(volume_mixed_partial(&lv("4,3,4,3,4"), &k("0,0,0,0,2")).unwrap(), int(-3));
        assert_eq!(volume_mixed_partial(&lv("1,1,1,2"), &k("0,0,0,1")).unwrap(), int(-1));
        assert_eq!(volume_mixed_partial(&lv("1/3,1/3,1,1,1"), &k("1,1,0,0,0")).unwrap(), int(4));
        assert_eq!(volume_mixed_partial(&lv("4,3,11"), &k("0,0,0")).unwrap(), int(0));
        assert!(matches!(
            volume_mixed_partial(&lv("1,1,1,1"), &k("0,0,0,1")),
            Err(Error::NonGeneric { .. })
        ));
    }

    #[test]
    fn series_is_the_exact_volume_at_half_the_lengths() {
        // The series and the subset formula use length conventions that differ
        // by a factor of two, so series(α) = vol(α / 2) = vol(α) / 2^{m−3}.
        for s in ["1/10,1/10,1/10,2/10", "1/10,1/10,1/10,1/10,1/10", "1/20,1/10,1/10,3/20,1/20,1/10"] {
            let a = lv(s);
            let m = a.len() as i32;
            let est = volume_witten_numeric(&a, 100_000).unwrap();
            let exact = volume_exact(&a).unwrap().to_f64().unwrap() / 2f64.powi(m - 3);
            assert!((est.value - exact).abs() <= est.tail_bound + 1e-9, "{s}: {est:?} vs {exact}");
        }
    }

    #[test]
    fn series_of_an_empty_space_is_small() {
        let est = volume_witten_numeric(&lv("1/20,1/20,1/20,2/5"), 100_000).unwrap();
        assert!(est.value.abs() <= est.tail_bound + 1e-6, "{est:?}");
    }

    #[test]
    fn series_partial_sums_differ_by_one_term() {
        let a = lv("1/7,1/5,1/3,1/4,1/9");
        let one = volume_witten_numeric(&a, 1).unwrap();
        let two = volume_witten_numeric(&a, 2).unwrap();
        let term2 = 4.0 / PI.powi(3) / 8.0;
        assert!((one.value - two.value).abs() <= term2 + 1e-15);
    }

    #[test]
    fn series_rejects_bad_input() {
        assert!(volume_witten_numeric(&lv("1/2,1/2,1/3"), 10).is_err());
        assert!(volume_witten_numeric(&lv("1/2,1/2,1/3,1"), 10).is_err());
        assert!(volume_witten_numeric(&lv("1/2,1/2,1/3,1/5"), 0).is_err());
    }
}
