//! The machine-readable output record and its plain and TSV renderings.
//!
//! JSON layout (stable; optional fields are omitted when absent):
//!
//! ```text
//! {
//!   "command":    subcommand name,
//!   "argv":       arguments after the program name, enough to re-run it,
//!   "inputs":     { "lengths", "exponents", "m", "k", "terms", ... },
//!   "results":    [ { "engine", "exponents"?, "value", "tail_bound"? }, ... ],
//!   "match":      true/false when several engines ran,
//!   "elapsed_ms": wall time
//! }
//! ```
//!
//! Integers print without a denominator and rationals as reduced `p/q`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::args::Format;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lengths: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cases: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub engine: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<String>,
    pub value: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<String>,
}

impl ResultRow {
    pub fn new(engine: impl Into<String>, value: impl ToString) -> Self {
        ResultRow {
            engine: engine.into(),
            exponents: None,
            value: value.to_string(),
            tail_bound: None,
        }
    }

    pub fn with_exponents(mut self, exponents: impl ToString) -> Self {
        self.exponents = Some(exponents.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub argv: Vec<String>,
    pub inputs: Inputs,
    pub results: Vec<ResultRow>,
    #[serde(rename = "match", default, skip_serializing_if = "Option::is_none")]
    pub matched: Option<bool>,
    pub elapsed_ms: f64,
}

impl OutputRecord {
    /// Equality ignoring the timing field.
    pub fn same_result(&self, other: &OutputRecord) -> bool {
        OutputRecord {
            elapsed_ms: 0.0,
            ..self.clone()
        } == OutputRecord {
            elapsed_ms: 0.0,
            ..other.clone()
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("records always serialize");
                s.push('\n');
                s
            }
            Format::Tsv => self.render_tsv(),
            Format::Plain => self.render_plain(),
        }
    }

    /// Columns: lengths, exponents, engine, value. Missing cells print as `-`.
    fn render_tsv(&self) -> String {
        let mut out = String::from("lengths\texponents\tengine\tvalue\n");
        let lengths = self.inputs.lengths.as_deref().unwrap_or("-");
        for row in &self.results {
            let exponents = row
                .exponents
                .as_deref()
                .or(self.inputs.exponents.as_deref())
                .unwrap_or("-");
            let _ = writeln!(out, "{lengths}\t{exponents}\t{}\t{}", row.engine, row.value);
        }
        out
    }

    fn render_plain(&self) -> String {
        let mut out = String::new();
        match self.command.as_str() {
            "triangular" => {
                let sets: Vec<&str> = self.results.iter().map(|r| r.value.as_str()).collect();
                let _ = writeln!(out, "{}", sets.join(" "));
            }
            "table" => {
                for r in &self.results {
                    let _ = writeln!(out, "{}\t{}", r.exponents.as_deref().unwrap_or(""), r.value);
                }
            }
            _ if self.results.len() == 1 && self.results[0].tail_bound.is_none() => {
                let _ = writeln!(out, "{}", self.results[0].value);
            }
            _ => {
                for r in &self.results {
                    match &r.tail_bound {
                        Some(t) => {
                            let _ = writeln!(out, "{}\t{} (tail bound {t})", r.engine, r.value);
                        }
                        None => {
                            let _ = writeln!(out, "{}\t{}", r.engine, r.value);
                        }
                    }
                }
            }
        }
        if let Some(m) = self.matched {
            let _ = writeln!(out, "match\t{m}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> OutputRecord {
        OutputRecord {
            command: "pairing".into(),
            argv: vec!["pairing".into(), "--lengths".into(), "1,1,1,2".into()],
            inputs: Inputs {
                lengths: Some("1,1,1,2".into()),
                exponents: Some("0,0,0,1".into()),
                ..Inputs::default()
            },
            results: vec![ResultRow::new("explicit", -1), ResultRow::new("kt", -1)],
            matched: Some(true),
            elapsed_ms: 1.5,
        }
    }

    #[test]
    fn json_round_trips() {
        let r = sample();
        let text = r.render(Format::Json);
        let back: OutputRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert!(text.contains("\"match\": true"));
        assert!(!text.contains("\"m\""));
    }

    #[test]
    fn tsv_has_fixed_columns() {
        let tsv = sample().render(Format::Tsv);
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines[0], "lengths\texponents\tengine\tvalue");
        assert_eq!(lines[1], "1,1,1,2\t0,0,0,1\texplicit\t-1");
    }

    #[test]
    fn timing_is_ignored_by_same_result() {
        let a = sample();
        let b = OutputRecord {
            elapsed_ms: 99.0,
            ..sample()
        };
        assert!(a.same_result(&b));
    }
}
