//! Independent pairing engines and the closed forms for equilateral spaces.
//!
//! None of the engines here share code with the triangular-set formula in
//! [`crate::pairings`] beyond the subset walk, which is what makes them
//! useful as cross-checks.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lengths::{chamber_data, is_empty, ExponentVector, LengthVector, Rational};
use crate::pairings::{Engine, PairingQuery, PairingResult};
use crate::triangular::fold_subset_signs;
use crate::walk::Execution;

/// `C(n, r)` exactly; zero when `r < 0` or `r > n`.
pub fn binomial(n: i64, r: i64) -> BigInt {
    if n < 0 || r < 0 || r > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(r.min(n - r)))
}

fn sign_pow(odd: bool) -> i64 {
    if odd {
        -1
    } else {
        1
    }
}

fn to_integer(what: &'static str, r: Rational) -> Result<BigInt> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(Error::NotIntegral {
            what,
            value: r.to_string(),
        })
    }
}

fn exact_quotient(count: i64, divisor: u32) -> Result<BigInt> {
    let (q, r) = count.div_rem(&(divisor as i64));
    if r != 0 {
        return Err(Error::ParityViolation {
            count: count.to_string(),
            divisor,
        });
    }
    Ok(BigInt::from(q))
}

/// Evaluates by splitting off the last two steps until three remain.
///
/// When the last two lengths coincide the last one is nudged up by
/// `radius / (2m)`, which stays inside the chamber.
pub fn pairing_recursive(q: &PairingQuery) -> Result<PairingResult> {
    let shift = Rational::new(BigInt::one(), BigInt::from(2));
    pairing_recursive_with_shift(q, &shift)
}

/// Same as [`pairing_recursive`] with the tie-breaking nudge set to
/// `shift · radius / m`. Any `0 < |shift| < 1` is admissible, as long as a
/// downward nudge keeps the length positive.
pub fn pairing_recursive_with_shift(q: &PairingQuery, shift: &Rational) -> Result<PairingResult> {
    if shift.is_zero() || shift.abs() >= Rational::one() {
        return Err(Error::Range(format!("shift {shift} must satisfy 0 < |shift| < 1")));
    }
    let order = last_positive_to_end(q.exponents().entries());
    let top = q.permuted(&order);
    let value = recurse(top.alpha().clone(), top.exponents().entries().to_vec(), shift)?;
    Ok(PairingResult {
        value,
        engine: Engine::Recursion,
        permutation: order,
    })
}

/// Order that moves the last index with a positive exponent to the end.
fn last_positive_to_end(k: &[u32]) -> Vec<usize> {
    let m = k.len();
    match k.iter().rposition(|&e| e > 0) {
        Some(j) => (0..m).filter(|&i| i != j).chain([j]).collect(),
        None => (0..m).collect(),
    }
}

fn recurse(alpha: LengthVector, k: Vec<u32>, shift: &Rational) -> Result<BigInt> {
    let m = alpha.len();
    if m == 3 {
        return Ok(if is_empty(&alpha) { BigInt::zero() } else { BigInt::one() });
    }
    let order = last_positive_to_end(&k);
    let alpha = alpha.permuted(&order);
    let k: Vec<u32> = order.iter().map(|&i| k[i]).collect();

    let mut a = alpha.into_entries();
    if a[m - 2] == a[m - 1] {
        let radius = chamber_data(&LengthVector::new(a.clone())?).radius;
        let eps = shift * radius / Rational::from_integer(BigInt::from(m));
        a[m - 1] += eps;
        if !a[m - 1].is_positive() {
            return Err(Error::Range(format!("shift {shift} drives a length to zero")));
        }
    }
    let (km1, km) = (k[m - 2], k[m - 1]);
    let diff = &a[m - 2] - &a[m - 1];
    let sign = sign_pow((km - 1) % 2 == 1) * sign_pow(diff.is_negative() && (km1 + km) % 2 == 1);

    let mut reduced_k = k[..m - 2].to_vec();
    reduced_k.push(km1 + km - 1);
    let mut plus = a[..m - 2].to_vec();
    plus.push(&a[m - 2] + &a[m - 1]);
    let mut minus = a[..m - 2].to_vec();
    minus.push(diff.abs());
    let plus = LengthVector::new(plus)?;
    let minus = LengthVector::new(minus)?;

    let k_minus = reduced_k.clone();
    let (p, n) = join(
        || recurse(plus, reduced_k, shift),
        || recurse(minus, k_minus, shift),
        m,
    );
    Ok(p? + BigInt::from(sign) * n?)
}

#[cfg(feature = "parallel")]
fn join<A: Send, B: Send>(a: impl FnOnce() -> A + Send, b: impl FnOnce() -> B + Send, m: usize) -> (A, B) {
    // Small subtrees are cheaper to run inline than to schedule.
    if m >= 8 {
        rayon::join(a, b)
    } else {
        (a(), b())
    }
}

#[cfg(not(feature = "parallel"))]
fn join<A, B>(a: impl FnOnce() -> A, b: impl FnOnce() -> B, _m: usize) -> (A, B) {
    (a(), b())
}

/// `−½ Σ_{S_R<0} (−1)^{|R| + Σ_{i∈R} k_i}` over all `R ⊆ {1, …, m}`.
pub fn pairing_konno_takakura(q: &PairingQuery) -> Result<PairingResult> {
    let odd = q.exponents().odd_mask();
    let partial = fold_subset_signs(q.alpha(), Execution::default(), || 0i64, |acc, mask, sign| {
        if sign == Ordering::Less {
            let parity = mask.count_ones() + (mask & odd).count_ones();
            *acc += sign_pow(parity % 2 == 1);
        }
    })?;
    let count: i64 = partial.into_iter().sum();
    Ok(PairingResult {
        value: -exact_quotient(count, 2)?,
        engine: Engine::KonnoTakakura,
        permutation: (0..q.m()).collect(),
    })
}

/// Signed count of `sgn(S_R)`: over all `R` with weight `¼` for even `m`,
/// over odd `|R|` with weight `½` for odd `m`.
pub fn pairing_yoshida(q: &PairingQuery) -> Result<PairingResult> {
    let m = q.m();
    let odd = q.exponents().odd_mask();
    let full = (1u64 << m) - 1;
    let even_m = m % 2 == 0;
    let partial = fold_subset_signs(q.alpha(), Execution::default(), || 0i64, |acc, mask, sign| {
        let size = mask.count_ones();
        if !even_m && size % 2 == 0 {
            return;
        }
        let outside = (odd & !mask & full).count_ones();
        let exponent = if even_m { size + 1 + outside } else { 1 + outside };
        let s = match sign {
            Ordering::Less => -1,
            Ordering::Greater => 1,
            Ordering::Equal => 0,
        };
        *acc += s * sign_pow(exponent % 2 == 1);
    })?;
    let count: i64 = partial.into_iter().sum();
    Ok(PairingResult {
        value: exact_quotient(count, if even_m { 4 } else { 2 })?,
        engine: Engine::Yoshida,
        permutation: (0..m).collect(),
    })
}

fn require_odd_m(m: usize) -> Result<()> {
    if m % 2 == 0 {
        return Err(Error::EvenM(m));
    }
    if m < 3 {
        return Err(Error::TooFewLengths(m));
    }
    Ok(())
}

/// `ρ_{m,2k} = (−1)^k C((m−3)/2, k) C(m−2, (m−1)/2) / C(m−2, 2k+1)` for odd `m`.
pub fn rho(m: usize, k: usize) -> Result<Rational> {
    require_odd_m(m)?;
    if 2 * k > m - 3 {
        return Err(Error::Range(format!("rho needs 2k <= m - 3, got m = {m}, k = {k}")));
    }
    let (m, k) = (m as i64, k as i64);
    let numer = binomial((m - 3) / 2, k) * binomial(m - 2, (m - 1) / 2) * sign_pow(k % 2 == 1);
    let value = Rational::new(numer, binomial(m - 2, 2 * k + 1));
    to_integer("rho", value.clone())?;
    Ok(value)
}

/// Pairing on the equilateral space `M_m` of odd size, `ρ_{m,2k}` with `k = Σ ⌊d_i / 2⌋`.
pub fn equilateral_pairing(m: usize, d: &ExponentVector) -> Result<BigInt> {
    require_odd_m(m)?;
    d.check_admissible(m)?;
    let k: usize = d.entries().iter().map(|&e| e as usize / 2).sum();
    to_integer("equilateral pairing", rho(m, k)?)
}

/// `∫ σ_1^k c_m^{m−3−k}` on `M_m` for odd `m` and even `k`, where `σ_1 = Σ c_i`.
///
/// Grouping the multinomial expansion by the number `2j` of odd exponents,
/// each group contributes a single `ρ` value times the weight `N_j` of
/// words of length `k` over `m` letters in which exactly `2j` prescribed
/// letters occur an odd number of times, times `C(m, 2j)`.
pub fn sigma1_pairing(m: usize, k: usize) -> Result<BigInt> {
    require_odd_m(m)?;
    if k % 2 == 1 || k > m - 3 {
        return Err(Error::Range(format!(
            "sigma1 needs an even k <= m - 3, got m = {m}, k = {k}"
        )));
    }
    let half = (m as i64 - 3) / 2;
    let mut total = Rational::zero();
    for j in 0..=(k as i64 / 2) {
        let weight = Rational::new(
            binomial(half, j) * sign_pow(j % 2 == 1),
            binomial(m as i64 - 2, 2 * j),
        );
        total += weight * Rational::from_integer(odd_letter_words(m, k, 2 * j as usize));
    }
    total *= Rational::from_integer(binomial(m as i64 - 2, (m as i64 - 1) / 2) * sign_pow(half % 2 == 1));
    to_integer("sigma1 pairing", total)
}

/// Words of length `k` over `m` letters with exactly `odd` letters used an
/// odd number of times, summed over the choice of those letters.
///
/// `k! [x^k] sinh(x)^odd cosh(x)^{m−odd}`, expanded through exponentials.
fn odd_letter_words(m: usize, k: usize, odd: usize) -> BigInt {
    let even = m - odd;
    let mut sum = BigInt::zero();
    for p in 0..=odd {
        for q in 0..=even {
            let base = BigInt::from(2 * (p + q) as i64 - m as i64);
            let term = binomial(odd as i64, p as i64) * binomial(even as i64, q as i64) * base.pow(k as u32);
            if (odd - p) % 2 == 1 {
                sum -= term;
            } else {
                sum += term;
            }
        }
    }
    let words = sum >> m;
    words * binomial(m as i64, odd as i64)
}

/// Both sides of `Σ_{j=0}^{b} (−1)^j C(a,j) C(a+1,b−j) = (−1)^{(b−1)/2} C(a,(b−1)/2)` for odd `b`.
pub fn alternating_binomial_convolution(a: u64, b: u64) -> Result<(BigInt, BigInt)> {
    if b % 2 == 0 {
        return Err(Error::Range(format!("b must be odd, got {b}")));
    }
    let (a, b) = (a as i64, b as i64);
    let lhs = (0..=b)
        .map(|j| binomial(a, j) * binomial(a + 1, b - j) * sign_pow(j % 2 == 1))
        .sum();
    let half = (b - 1) / 2;
    let rhs = binomial(a, half) * sign_pow(half % 2 == 1);
    Ok((lhs, rhs))
}

/// Both sides of the identity that turns the character sum for `M_m` into `C((m−3)/2, k)`:
/// `Σ_j (−1)^{j+k} C(2k+1,j) C(m−2k−3,(m−3)/2−j) C(m−2,2k+1) / C(m−2,(m−1)/2)`.
pub fn equilateral_binomial_identity(m: usize, k: usize) -> Result<(Rational, Rational)> {
    require_odd_m(m)?;
    if 2 * k > m - 3 {
        return Err(Error::Range(format!("need 2k <= m - 3, got m = {m}, k = {k}")));
    }
    let (m, k) = (m as i64, k as i64);
    let sum: BigInt = (0..=2 * k + 1)
        .map(|j| {
            binomial(2 * k + 1, j) * binomial(m - 2 * k - 3, (m - 3) / 2 - j) * sign_pow((j + k) % 2 == 1)
        })
        .sum();
    let lhs = Rational::new(sum * binomial(m - 2, 2 * k + 1), binomial(m - 2, (m - 1) / 2));
    let rhs = Rational::from_integer(binomial((m - 3) / 2, k));
    Ok((lhs, rhs))
}
