//! Cross-checks between engines, the volume derivative and the symmetries
//! of the pairing, on seeded random cases or on a corpus of known values.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use polyspace::{
    chamber_data, pairing_explicit, volume_mixed_partial, Engine, ExponentVector, LengthVector,
    PairingQuery, Rational,
};
use rand::Rng;

use crate::sampler::Sampler;

/// Above this size the finite-difference stencil gets too expensive to run per case.
pub const MIXED_PARTIAL_MAX_M: usize = 10;

/// The built-in corpus: `lengths<TAB>exponents<TAB>expected<TAB>source`.
pub const CORPUS: &str = include_str!("../corpus/known_values.tsv");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub check: &'static str,
    pub lengths: String,
    pub exponents: String,
    pub detail: String,
}

impl Failure {
    fn new(check: &'static str, alpha: &LengthVector, k: &ExponentVector, detail: impl Into<String>) -> Self {
        Failure {
            check,
            lengths: alpha.to_string(),
            exponents: k.to_string(),
            detail: detail.into(),
        }
    }

    /// A command that re-runs the failing query through every engine.
    pub fn reproducer(&self) -> String {
        format!(
            "polyspace pairing --lengths {} --exponents {} --engine all",
            self.lengths, self.exponents
        )
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} check failed on ({}; {}): {}", self.check, self.lengths, self.exponents, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub cases: usize,
    pub checks: usize,
    /// How many times each named check ran.
    pub per_check: BTreeMap<&'static str, usize>,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn merge(&mut self, other: Report) {
        self.cases += other.cases;
        self.checks += other.checks;
        for (name, n) in other.per_check {
            *self.per_check.entry(name).or_default() += n;
        }
        self.failures.extend(other.failures);
    }
}

struct Checker<'a> {
    alpha: &'a LengthVector,
    k: &'a ExponentVector,
    reference: BigInt,
    report: Report,
}

impl<'a> Checker<'a> {
    fn new(q: &'a PairingQuery) -> Self {
        Checker {
            alpha: q.alpha(),
            k: q.exponents(),
            reference: pairing_explicit(q).value,
            report: Report {
                cases: 1,
                ..Report::default()
            },
        }
    }

    fn expect(&mut self, check: &'static str, got: polyspace::Result<BigInt>, want: &BigInt) {
        self.report.checks += 1;
        *self.report.per_check.entry(check).or_default() += 1;
        let detail = match got {
            Ok(v) if &v == want => return,
            Ok(v) => format!("got {v}, expected {want}"),
            Err(e) => format!("error: {e}"),
        };
        self.report.failures.push(Failure::new(check, self.alpha, self.k, detail));
    }

    fn engines(&mut self, q: &PairingQuery, want: &BigInt) {
        for engine in Engine::ALL {
            let got = q.evaluate(engine).map(|r| r.value);
            self.expect(engine.name(), got, want);
        }
        if q.m() <= MIXED_PARTIAL_MAX_M {
            let got = volume_mixed_partial(q.alpha(), q.exponents()).and_then(|v| {
                if v.is_integer() {
                    Ok(v.to_integer())
                } else {
                    Err(polyspace::Error::NotIntegral {
                        what: "volume derivative",
                        value: v.to_string(),
                    })
                }
            });
            self.expect("mixed_partial", got, want);
        }
    }

    fn explicit_on(&mut self, check: &'static str, alpha: LengthVector, k: ExponentVector, want: &BigInt) {
        let got = PairingQuery::new(alpha, k).map(|q| pairing_explicit(&q).value);
        self.expect(check, got, want);
    }
}

/// Runs every engine and every invariant on one query.
pub fn check_query(q: &PairingQuery, aux: &mut Sampler) -> Report {
    let mut c = Checker::new(q);
    let reference = c.reference.clone();
    let (alpha, k) = (q.alpha(), q.exponents());
    let m = q.m();
    c.engines(q, &reference);

    let order = aux.permutation(m);
    c.explicit_on("permutation", alpha.permuted(&order), k.permuted(&order), &reference);

    let squares: Vec<usize> = (0..m).filter(|&i| k.entries()[i] >= 2).collect();
    if !squares.is_empty() {
        let i = squares[aux.rng().random_range(0..squares.len())];
        let mut j = aux.rng().random_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let mut moved = k.entries().to_vec();
        moved[i] -= 2;
        moved[j] += 2;
        c.explicit_on("square_exchange", alpha.clone(), ExponentVector::new(moved), &reference);
    }

    // Nudges below min(radius, shortest side) / m keep the chamber and positivity.
    let radius = chamber_data(alpha).radius;
    let reach = alpha.entries().iter().min().expect("m >= 3").min(&radius).clone();
    let nudged: Vec<Rational> = alpha
        .entries()
        .iter()
        .map(|x| {
            let t: i64 = aux.rng().random_range(-99..=99);
            x + &reach * Rational::new(BigInt::from(t), BigInt::from(100 * m as i64))
        })
        .collect();
    match LengthVector::new(nudged) {
        Ok(b) => c.explicit_on("chamber", b, k.clone(), &reference),
        Err(e) => c.expect("chamber", Err(e), &reference),
    }

    let lambda = aux.rational();
    match alpha.scaled(&lambda) {
        Ok(b) => c.explicit_on("scaling", b, k.clone(), &reference),
        Err(e) => c.expect("scaling", Err(e), &reference),
    }

    let i = aux.rng().random_range(0..m);
    let mut entries = alpha.entries().to_vec();
    let others: Rational = entries.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x).sum();
    entries[i] = others + aux.rational();
    match LengthVector::new(entries) {
        Ok(b) => c.explicit_on("empty_zero", b, k.clone(), &BigInt::zero()),
        Err(e) => c.expect("empty_zero", Err(e), &BigInt::zero()),
    }
    c.report
}

/// Checks `cases` seeded random queries; the outcome does not depend on thread count.
pub fn verify_random(seed: u64, cases: usize, min_m: usize, max_m: usize) -> Report {
    let mut sampler = Sampler::new(seed);
    let queries: Vec<PairingQuery> = (0..cases).map(|_| sampler.query(min_m, max_m)).collect();
    let run = |(i, q): (usize, &PairingQuery)| check_query(q, &mut Sampler::stream(seed, i as u64));
    #[cfg(feature = "parallel")]
    let reports: Vec<Report> = {
        use rayon::prelude::*;
        queries.par_iter().enumerate().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let reports: Vec<Report> = queries.iter().enumerate().map(run).collect();
    let mut total = Report::default();
    for r in reports {
        total.merge(r);
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub lengths: String,
    pub exponents: String,
    pub expected: BigInt,
    pub source: String,
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, String> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') || line.starts_with("lengths\t") {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 {
            return Err(format!("corpus line {}: expected 4 tab-separated columns", n + 1));
        }
        let expected = cols[2]
            .parse()
            .map_err(|_| format!("corpus line {}: bad expected value {:?}", n + 1, cols[2]))?;
        out.push(CorpusEntry {
            lengths: cols[0].to_string(),
            exponents: cols[1].to_string(),
            expected,
            source: cols[3].to_string(),
        });
    }
    Ok(out)
}

/// Every engine (and the volume derivative, when affordable) against each recorded value.
pub fn verify_corpus(entries: &[CorpusEntry]) -> Report {
    let mut total = Report::default();
    for e in entries {
        let parsed = e
            .lengths
            .parse::<LengthVector>()
            .and_then(|a| Ok((a, e.exponents.parse::<ExponentVector>()?)))
            .and_then(|(a, k)| PairingQuery::new(a, k));
        match parsed {
            Ok(q) => {
                let mut c = Checker::new(&q);
                c.engines(&q, &e.expected);
                total.merge(c.report);
            }
            Err(err) => total.merge(Report {
                cases: 1,
                checks: 1,
                per_check: BTreeMap::from([("corpus", 1)]),
                failures: vec![Failure {
                    check: "corpus",
                    lengths: e.lengths.clone(),
                    exponents: e.exponents.clone(),
                    detail: format!("{err} ({})", e.source),
                }],
            }),
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_cases_pass() {
        let r = verify_random(7, 40, 3, 8);
        assert_eq!(r.cases, 40);
        assert!(r.failures.is_empty(), "{:?}", r.failures);
        assert!(r.checks > 40 * 8);
    }

    #[test]
    fn built_in_corpus_passes() {
        let entries = parse_corpus(CORPUS).unwrap();
        assert!(entries.len() >= 30);
        let r = verify_corpus(&entries);
        assert!(r.failures.is_empty(), "{:?}", r.failures);
    }

    #[test]
    fn a_wrong_expectation_is_reported_with_a_reproducer() {
        let entries = parse_corpus("4,3,4,3,4\t0,0,0,0,2\t-2\tdeliberately wrong\n").unwrap();
        let r = verify_corpus(&entries);
        assert_eq!(r.failures.len(), 5);
        assert_eq!(
            r.failures[0].reproducer(),
            "polyspace pairing --lengths 4,3,4,3,4 --exponents 0,0,0,0,2 --engine all"
        );
    }

    #[test]
    fn malformed_corpus_lines_are_rejected() {
        assert!(parse_corpus("1,1,1\t0,0,0\n").is_err());
        assert!(parse_corpus("1,1,1\t0,0,0\tx\tsrc\n").is_err());
    }
}
