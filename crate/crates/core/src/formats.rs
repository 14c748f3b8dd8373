//! JSON file formats: matrix sets and rewrite certificates.
//!
//! Entries are strings so that values stay exact across JSON readers.
//! Letter `i` in any word refers to `generators[i-1]`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact_linalg::{FieldSpec, SquareMatrix};
use crate::rewrite::{RewriteCertificate, RewriteStep, StepKind, Term, ValuedWord};
use crate::span_engine::GeneratorSet;
use crate::words::Word;

pub const MATRIX_SET_FORMAT: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSetFile {
    pub format: u32,
    pub field: FieldSpec,
    pub n: usize,
    /// `generators[g][row][col]`.
    pub generators: Vec<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

fn format_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Format {
        location: location.into(),
        message: message.into(),
    }
}

fn json_err(e: serde_json::Error) -> Error {
    format_err(
        format!("line {} column {}", e.line(), e.column()),
        e.to_string(),
    )
}

impl MatrixSetFile {
    pub fn from_generators(g: &GeneratorSet) -> Self {
        let n = g.n();
        let generators = g
            .mats()
            .iter()
            .map(|m| {
                (0..n)
                    .map(|i| (0..n).map(|j| Value::String(m.get(i, j).to_string())).collect())
                    .collect()
            })
            .collect();
        MatrixSetFile {
            format: MATRIX_SET_FORMAT,
            field: g.field(),
            n,
            generators,
            names: g.names().map(|s| s.to_vec()),
        }
    }

    pub fn to_generators(&self) -> Result<GeneratorSet> {
        if self.format != MATRIX_SET_FORMAT {
            return Err(format_err(
                "format",
                format!("unsupported version {}, expected {MATRIX_SET_FORMAT}", self.format),
            ));
        }
        let n = self.n;
        if n < 2 {
            return Err(format_err("n", format!("dimension must be at least 2, got {n}")));
        }
        if self.generators.is_empty() {
            return Err(format_err("generators", "at least one matrix is required"));
        }
        if let Some(names) = &self.names {
            if names.len() != self.generators.len() {
                return Err(format_err(
                    "names",
                    format!("{} names for {} generators", names.len(), self.generators.len()),
                ));
            }
        }
        let mut mats = Vec::with_capacity(self.generators.len());
        for (gi, rows) in self.generators.iter().enumerate() {
            if rows.len() != n {
                return Err(format_err(
                    format!("generators[{gi}]"),
                    format!("{} rows, expected {n}", rows.len()),
                ));
            }
            let mut entries = Vec::with_capacity(n * n);
            for (i, row) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(format_err(
                        format!("generators[{gi}][{i}]"),
                        format!("{} entries, expected {n}", row.len()),
                    ));
                }
                for (j, v) in row.iter().enumerate() {
                    let at = || format!("generators[{gi}][{i}][{j}]");
                    let text = match v {
                        Value::String(s) => s.clone(),
                        Value::Number(x) if x.is_i64() || x.is_u64() => x.to_string(),
                        other => {
                            return Err(format_err(
                                at(),
                                format!("expected an integer or fraction string, got {other}"),
                            ))
                        }
                    };
                    let s = self
                        .field
                        .parse_scalar(&text)
                        .map_err(|e| format_err(at(), e.to_string()))?;
                    entries.push(s);
                }
            }
            mats.push(SquareMatrix::new(self.field, n, entries)?);
        }
        GeneratorSet::new(self.field, n, mats, self.names.clone())
    }
}

pub fn parse_matrix_set(text: &str) -> Result<GeneratorSet> {
    let file: MatrixSetFile = serde_json::from_str(text).map_err(json_err)?;
    file.to_generators()
}

pub fn render_matrix_set(g: &GeneratorSet) -> String {
    let mut s = serde_json::to_string_pretty(&MatrixSetFile::from_generators(g))
        .expect("matrix set serializes");
    s.push('\n');
    s
}

#[derive(Deserialize)]
struct RawTerm {
    coefficient: String,
    word: Vec<usize>,
}

#[derive(Deserialize)]
struct RawValued {
    word: Vec<usize>,
    value: String,
}

#[derive(Deserialize)]
struct RawStep {
    kind: StepKind,
    source: RawValued,
    position: Option<usize>,
    replaced: Option<RawValued>,
    replacements: Vec<RawTerm>,
    produced: Vec<RawValued>,
}

#[derive(Deserialize)]
struct RawCertificate {
    field: FieldSpec,
    input: Vec<usize>,
    k: usize,
    threshold: usize,
    modulo_level: usize,
    ordered: bool,
    terms: Vec<RawTerm>,
    steps: Vec<RawStep>,
}

/// Reads a certificate written by the rewriter. Words are checked against
/// the alphabet size `t` of the set it will be replayed on.
pub fn parse_certificate(text: &str, t: usize) -> Result<RewriteCertificate> {
    let raw: RawCertificate = serde_json::from_str(text).map_err(json_err)?;
    let field = raw.field;
    let word = |letters: Vec<usize>, at: &str| {
        Word::new(letters, t).map_err(|e| format_err(at, e.to_string()))
    };
    let term = |r: RawTerm, at: String| -> Result<Term> {
        let coefficient = field
            .parse_scalar(&r.coefficient)
            .map_err(|e| format_err(format!("{at}.coefficient"), e.to_string()))?;
        Ok(Term {
            coefficient,
            word: word(r.word, &format!("{at}.word"))?,
        })
    };
    let valued = |r: RawValued, at: String| -> Result<ValuedWord> {
        Ok(ValuedWord {
            word: word(r.word, &at)?,
            value: r.value,
        })
    };
    let terms = raw
        .terms
        .into_iter()
        .enumerate()
        .map(|(i, r)| term(r, format!("terms[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let mut steps = Vec::with_capacity(raw.steps.len());
    for (i, s) in raw.steps.into_iter().enumerate() {
        let at = format!("steps[{i}]");
        steps.push(RewriteStep {
            kind: s.kind,
            source: valued(s.source, format!("{at}.source"))?,
            position: s.position,
            replaced: s
                .replaced
                .map(|r| valued(r, format!("{at}.replaced")))
                .transpose()?,
            replacements: s
                .replacements
                .into_iter()
                .enumerate()
                .map(|(j, r)| term(r, format!("{at}.replacements[{j}]")))
                .collect::<Result<_>>()?,
            produced: s
                .produced
                .into_iter()
                .enumerate()
                .map(|(j, r)| valued(r, format!("{at}.produced[{j}]")))
                .collect::<Result<_>>()?,
        });
    }
    Ok(RewriteCertificate {
        field,
        input: word(raw.input, "input")?,
        k: raw.k,
        threshold: raw.threshold,
        modulo_level: raw.modulo_level,
        ordered: raw.ordered,
        terms,
        steps,
    })
}

/// Parses a word given as `"1,2,2"`, `"1 2 2"` or `"122"` (the last form
/// only when every letter is a single digit).
pub fn parse_word(text: &str, t: usize) -> Result<Word> {
    let text = text.trim();
    let bad = || format_err("word", format!("cannot read {text:?} as letters"));
    let letters = if text.contains([',', ' ', '.']) {
        text.split([',', ' ', '.'])
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?
    } else {
        text.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
            .collect::<Result<Vec<_>>>()?
    };
    Word::new(letters, t)
}
