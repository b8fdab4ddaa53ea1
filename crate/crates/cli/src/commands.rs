//! One function per subcommand, each producing an [`OutputRecord`].

use std::time::Instant;

use num_bigint::BigInt;
use polyspace::{
    chamber_data, enumerate_triangular, equilateral_pairing, find_degeneracy, pairing_table,
    sigma1_pairing, volume_exact, volume_witten_numeric, Engine, PairingQuery,
};

use crate::args::{Command, EngineChoice, PairingArgs, VerifyArgs};
use crate::error::{CliError, EXIT_MISMATCH, EXIT_OK};
use crate::record::{Inputs, OutputRecord, ResultRow};
use crate::verify::{parse_corpus, verify_corpus, verify_random, Report, CORPUS};

/// Largest `m` the random verifier accepts; beyond it a single case takes minutes.
pub const VERIFY_MAX_M: usize = 20;

pub struct Outcome {
    pub record: OutputRecord,
    pub code: i32,
    /// Extra diagnostics for stderr.
    pub notes: Vec<String>,
}

impl Outcome {
    fn ok(record: OutputRecord) -> Self {
        Outcome {
            record,
            code: EXIT_OK,
            notes: Vec::new(),
        }
    }
}

fn record(command: &str, argv: &[String], inputs: Inputs, results: Vec<ResultRow>) -> OutputRecord {
    OutputRecord {
        command: command.to_string(),
        argv: argv.to_vec(),
        inputs,
        results,
        matched: None,
        elapsed_ms: 0.0,
    }
}

pub fn execute(command: &Command, argv: &[String]) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let mut outcome = match command {
        Command::Pairing(a) => pairing(a, argv)?,
        Command::Table(a) => {
            let table = pairing_table(&a.lengths)?;
            let rows = table
                .into_iter()
                .map(|(k, v)| ResultRow::new("explicit", v).with_exponents(k))
                .collect();
            let inputs = Inputs {
                lengths: Some(a.lengths.to_string()),
                ..Inputs::default()
            };
            Outcome::ok(record("table", argv, inputs, rows))
        }
        Command::Triangular(a) => {
            let family = enumerate_triangular(&a.lengths)?;
            let rows = family
                .members
                .iter()
                .map(|t| ResultRow::new("triangular", t.mask))
                .collect();
            let inputs = Inputs {
                lengths: Some(a.lengths.to_string()),
                ..Inputs::default()
            };
            Outcome::ok(record("triangular", argv, inputs, rows))
        }
        Command::Volume(a) => {
            let mut rows = vec![ResultRow::new("exact", volume_exact(&a.lengths)?)];
            if let Some(terms) = a.series_terms {
                let est = volume_witten_numeric(&a.lengths, terms)?;
                let mut row = ResultRow::new("series", est.value);
                row.tail_bound = Some(est.tail_bound.to_string());
                rows.push(row);
            }
            let inputs = Inputs {
                lengths: Some(a.lengths.to_string()),
                terms: a.series_terms,
                ..Inputs::default()
            };
            Outcome::ok(record("volume", argv, inputs, rows))
        }
        Command::Equilateral(a) => {
            let value = equilateral_pairing(a.m, &a.degrees)?;
            let inputs = Inputs {
                lengths: Some(vec!["1"; a.m].join(",")),
                exponents: Some(a.degrees.to_string()),
                m: Some(a.m),
                ..Inputs::default()
            };
            Outcome::ok(record("equilateral", argv, inputs, vec![ResultRow::new("closed_form", value)]))
        }
        Command::Sigma1(a) => {
            let value = sigma1_pairing(a.m, a.k)?;
            let inputs = Inputs {
                m: Some(a.m),
                k: Some(a.k),
                ..Inputs::default()
            };
            Outcome::ok(record("sigma1", argv, inputs, vec![ResultRow::new("closed_form", value)]))
        }
        Command::Generic(a) => {
            let data = chamber_data(&a.lengths);
            let mut rows = vec![
                ResultRow::new("generic", data.is_generic()),
                ResultRow::new("radius", &data.radius),
                ResultRow::new("empty", data.empty),
            ];
            if let Some(signs) = find_degeneracy(&a.lengths) {
                rows.push(ResultRow::new("wall", signs));
            }
            let inputs = Inputs {
                lengths: Some(a.lengths.to_string()),
                ..Inputs::default()
            };
            Outcome::ok(record("generic", argv, inputs, rows))
        }
        Command::Verify(a) => verify(a, argv)?,
        Command::Replay(_) => unreachable!("replay is handled before dispatch"),
    };
    outcome.record.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(outcome)
}

fn pairing(a: &PairingArgs, argv: &[String]) -> Result<Outcome, CliError> {
    let q = PairingQuery::new(a.lengths.clone(), a.exponents.clone())?;
    let engines: Vec<Engine> = match a.engine {
        EngineChoice::Explicit => vec![Engine::Explicit],
        EngineChoice::Recursion => vec![Engine::Recursion],
        EngineChoice::Kt => vec![Engine::KonnoTakakura],
        EngineChoice::Yoshida => vec![Engine::Yoshida],
        EngineChoice::All => Engine::ALL.to_vec(),
    };
    let values: Vec<BigInt> = engines
        .iter()
        .map(|&e| q.evaluate(e).map(|r| r.value))
        .collect::<Result<_, _>>()?;
    let rows = engines
        .iter()
        .zip(&values)
        .map(|(e, v)| ResultRow::new(e.name(), v))
        .collect();
    let inputs = Inputs {
        lengths: Some(a.lengths.to_string()),
        exponents: Some(a.exponents.to_string()),
        ..Inputs::default()
    };
    let mut out = Outcome::ok(record("pairing", argv, inputs, rows));
    if engines.len() > 1 {
        let matched = values.windows(2).all(|w| w[0] == w[1]);
        out.record.matched = Some(matched);
        if !matched {
            out.code = EXIT_MISMATCH;
            out.notes.push("engines disagree".to_string());
        }
    }
    Ok(out)
}

fn verify(a: &VerifyArgs, argv: &[String]) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::default();
    let report = if a.corpus || a.corpus_file.is_some() {
        let text = match &a.corpus_file {
            Some(path) => std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?,
            None => CORPUS.to_string(),
        };
        let entries = parse_corpus(&text).map_err(CliError::usage)?;
        verify_corpus(&entries)
    } else {
        if a.min_m < 3 || a.min_m > a.max_m || a.max_m > VERIFY_MAX_M {
            return Err(CliError::usage(format!(
                "need 3 <= --min-m <= --max-m <= {VERIFY_MAX_M}, got {} and {}",
                a.min_m, a.max_m
            )));
        }
        inputs.seed = Some(a.seed);
        inputs.cases = Some(a.cases);
        inputs.m = Some(a.max_m);
        verify_random(a.seed, a.cases, a.min_m, a.max_m)
    };
    Ok(verify_outcome(report, inputs, argv))
}

fn verify_outcome(report: Report, inputs: Inputs, argv: &[String]) -> Outcome {
    let mut rows = vec![
        ResultRow::new("cases", report.cases),
        ResultRow::new("checks", report.checks),
        ResultRow::new("mismatches", report.failures.len()),
    ];
    let mut notes = Vec::new();
    for f in &report.failures {
        rows.push(
            ResultRow::new(format!("mismatch:{}", f.check), &f.detail).with_exponents(&f.exponents),
        );
        notes.push(format!("{f}\n  reproduce with: {}", f.reproducer()));
    }
    let matched = report.failures.is_empty();
    let mut rec = record("verify", argv, inputs, rows);
    rec.matched = Some(matched);
    Outcome {
        record: rec,
        code: if matched { EXIT_OK } else { EXIT_MISMATCH },
        notes,
    }
}
