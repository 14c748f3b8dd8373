//! Certified subword rewriting.
//!
//! Given `r_k - r_{k-1} <= N`, a word `u` of length `m` with more than `N`
//! formally distinct `k`-subwords is rewritten, modulo `L_{m-1}`, as a
//! combination of words of length `m` with at most `N` distinct
//! `k`-subwords. Each step takes the smallest subword class that is a
//! combination (mod `L_{k-1}`) of larger classes of the same word and
//! splices those larger classes in its place, so every produced word is
//! numerically larger than its source. Words are processed smallest first
//! from a single worklist; since every step only produces larger words,
//! each word is expanded at most once and the process terminates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_linalg::{FieldSpec, Membership, Scalar, SquareMatrix};
use crate::pbw::ordered_expression;
use crate::span_engine::{Filtration, GeneratorSet};
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub coefficient: Scalar,
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuedWord {
    pub word: Word,
    /// Base-`(t+1)` value as a decimal string.
    pub value: String,
}

impl ValuedWord {
    pub fn new(word: Word) -> Self {
        let value = word.numeric_value().to_string();
        ValuedWord { word, value }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    /// Replace one `k`-subword class by larger classes.
    Subword,
    /// Rewrite a non-ordered word over larger ordered words.
    Reorder,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RewriteStep {
    pub kind: StepKind,
    pub source: ValuedWord,
    /// Start of the replaced window (subword steps only).
    pub position: Option<usize>,
    pub replaced: Option<ValuedWord>,
    /// Subword steps: `k`-words with coefficients. Reorder steps: whole
    /// ordered words with coefficients.
    pub replacements: Vec<Term>,
    /// Words pushed back on the worklist, each larger than `source`.
    pub produced: Vec<ValuedWord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RewriteCertificate {
    pub field: FieldSpec,
    pub input: Word,
    pub k: usize,
    pub threshold: usize,
    /// `m - 1`: the identity holds modulo `L_{m-1}`.
    pub modulo_level: usize,
    /// Terms were kept in ordered form.
    pub ordered: bool,
    pub terms: Vec<Term>,
    pub steps: Vec<RewriteStep>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RewriteOptions {
    /// Override `N`; must be at least `r_k - r_{k-1}`.
    pub threshold: Option<usize>,
    /// Keep every term ordered, using the ordered-rewriting property at
    /// each step. Fails with `NotApplicable` when that property breaks.
    pub ordered: bool,
}

/// Rewrites `u` with `N = r_k - r_{k-1}` taken from the filtration.
pub fn rewrite_word(
    g: &GeneratorSet,
    u: &Word,
    k: usize,
    f: &Filtration,
) -> Result<RewriteCertificate> {
    rewrite_word_with(g, u, k, f, RewriteOptions::default())
}

pub fn rank_step(f: &Filtration, k: usize) -> Result<usize> {
    Ok(f.rank_at(k)? - f.rank_at(k - 1)?)
}

pub fn rewrite_word_with(
    g: &GeneratorSet,
    u: &Word,
    k: usize,
    f: &Filtration,
    opts: RewriteOptions,
) -> Result<RewriteCertificate> {
    if k == 0 {
        return Err(Error::ZeroSubwordLength);
    }
    let m = u.len();
    if m < k {
        return Err(Error::Invalid(format!(
            "word of length {m} has no {k}-subwords"
        )));
    }
    if u.alphabet() != g.t() {
        return Err(Error::AlphabetMismatch {
            left: u.alphabet(),
            right: g.t(),
        });
    }
    f.basis_at(m)?;
    let step = rank_step(f, k)?;
    let threshold = opts.threshold.unwrap_or(step);
    if threshold < step {
        return Err(Error::Invalid(format!(
            "threshold {threshold} is below r_{k} - r_{} = {step}",
            k - 1
        )));
    }

    let lower = f.basis_at(k - 1)?;
    let mut class_cache: BTreeMap<Word, SquareMatrix> = BTreeMap::new();
    let mut pending: BTreeMap<Word, Scalar> = BTreeMap::new();
    pending.insert(u.clone(), g.field().one());
    let mut finished: BTreeMap<Word, Scalar> = BTreeMap::new();
    let mut steps = Vec::new();

    // BTreeMap order on equal-length words is numeric order.
    while let Some((w, c)) = pending.pop_first() {
        if c.is_zero() {
            continue;
        }
        if opts.ordered && !w.is_ordered() {
            let expr = ordered_expression(g, &w, f)?.ok_or_else(|| {
                Error::NotApplicable(format!(
                    "{w} has no expression over larger ordered words"
                ))
            })?;
            let mut produced = Vec::with_capacity(expr.len());
            for (v, cv) in &expr {
                accumulate(&mut pending, v.clone(), &c * cv);
                produced.push(ValuedWord::new(v.clone()));
            }
            steps.push(RewriteStep {
                kind: StepKind::Reorder,
                source: ValuedWord::new(w),
                position: None,
                replaced: None,
                replacements: expr
                    .into_iter()
                    .map(|(word, coefficient)| Term { coefficient, word })
                    .collect(),
                produced,
            });
            continue;
        }
        let census = w.census(k)?;
        if census.distinct <= threshold {
            accumulate(&mut finished, w, c);
            continue;
        }

        // Scan classes from the largest down; the last hit is the minimal
        // class expressible over strictly larger classes mod L_{k-1}.
        let mut basis = lower.clone();
        let lower_rank = basis.rank();
        let mut hit: Option<(usize, Vec<(Word, Scalar)>)> = None;
        for (i, class) in census.classes.iter().enumerate().rev() {
            let mat = match class_cache.get(class) {
                Some(mat) => mat.clone(),
                None => {
                    let mat = g.evaluate(class)?;
                    class_cache.insert(class.clone(), mat.clone());
                    mat
                }
            };
            match basis.membership(&mat)? {
                Membership::In(coeffs) => {
                    let combo = basis.tags()[lower_rank..]
                        .iter()
                        .cloned()
                        .zip(coeffs.into_iter().skip(lower_rank))
                        .filter(|(_, x)| !x.is_zero())
                        .collect();
                    hit = Some((i, combo));
                }
                Membership::NotIn(_) => {
                    basis.insert(&mat, class.clone())?;
                }
            }
        }
        let Some((i, combo)) = hit else {
            return Err(Error::NotApplicable(format!(
                "no {k}-subword of {w} is a combination of larger subwords modulo L_{}",
                k - 1
            )));
        };
        let replaced = census.classes[i].clone();
        let position = w.find(&replaced).expect("class occurs in its word");
        let mut produced = Vec::with_capacity(combo.len());
        for (v, cv) in &combo {
            let next = w.splice(position, v);
            accumulate(&mut pending, next.clone(), &c * cv);
            produced.push(ValuedWord::new(next));
        }
        steps.push(RewriteStep {
            kind: StepKind::Subword,
            source: ValuedWord::new(w),
            position: Some(position),
            replaced: Some(ValuedWord::new(replaced)),
            replacements: combo
                .into_iter()
                .map(|(word, coefficient)| Term { coefficient, word })
                .collect(),
            produced,
        });
    }

    Ok(RewriteCertificate {
        field: g.field(),
        input: u.clone(),
        k,
        threshold,
        modulo_level: m - 1,
        ordered: opts.ordered,
        terms: finished
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(word, coefficient)| Term { coefficient, word })
            .collect(),
        steps,
    })
}

fn accumulate(map: &mut BTreeMap<Word, Scalar>, w: Word, c: Scalar) {
    match map.get_mut(&w) {
        Some(acc) => *acc = &*acc + &c,
        None => {
            map.insert(w, c);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub valid: bool,
    pub problems: Vec<String>,
}

/// Re-checks a certificate from scratch against `g` and `f`.
pub fn verify_certificate(g: &GeneratorSet, c: &RewriteCertificate, f: &Filtration) -> Verification {
    let mut problems = Vec::new();
    if let Err(e) = verify_into(g, c, f, &mut problems) {
        problems.push(e.to_string());
    }
    Verification {
        valid: problems.is_empty(),
        problems,
    }
}

fn verify_into(
    g: &GeneratorSet,
    c: &RewriteCertificate,
    f: &Filtration,
    problems: &mut Vec<String>,
) -> Result<()> {
    let m = c.input.len();
    if c.field != g.field() {
        problems.push(format!("certificate field {} vs set field {}", c.field, g.field()));
        return Ok(());
    }
    if c.k == 0 || c.k > m {
        problems.push(format!("k = {} out of range for length {m}", c.k));
        return Ok(());
    }
    if c.modulo_level + 1 != m {
        problems.push(format!("modulo level {} for length {m}", c.modulo_level));
    }
    let step = rank_step(f, c.k)?;
    if c.threshold < step {
        problems.push(format!("threshold {} below rank step {step}", c.threshold));
    }

    let mut residual = g.evaluate(&c.input)?;
    for term in &c.terms {
        let w = &term.word;
        if w.len() != m {
            problems.push(format!("term {w} has length {} instead of {m}", w.len()));
            continue;
        }
        let distinct = w.census(c.k)?.distinct;
        if distinct > c.threshold {
            problems.push(format!(
                "term {w} has {distinct} distinct {}-subwords, more than {}",
                c.k, c.threshold
            ));
        }
        if c.ordered && !w.is_ordered() {
            problems.push(format!("term {w} is not ordered"));
        }
        if !g.field().contains(&term.coefficient) {
            problems.push(format!("coefficient of {w} is not in {}", g.field()));
            continue;
        }
        residual.add_scaled(&-&term.coefficient, &g.evaluate(w)?)?;
    }
    if !f.basis_at(c.modulo_level)?.membership(&residual)?.is_in() {
        problems.push(format!(
            "input minus the terms is not in L_{}",
            c.modulo_level
        ));
    }

    for (i, s) in c.steps.iter().enumerate() {
        check_value(&s.source, problems, i);
        for p in &s.produced {
            check_value(p, problems, i);
            if p.word.len() != s.source.word.len() || p.word.letters() <= s.source.word.letters() {
                problems.push(format!(
                    "step {i}: {} does not exceed {}",
                    p.word, s.source.word
                ));
            }
        }
        if let Some(r) = &s.replaced {
            check_value(r, problems, i);
            for t in &s.replacements {
                if t.word.len() != r.word.len() || t.word.letters() <= r.word.letters() {
                    problems.push(format!(
                        "step {i}: replacement {} does not exceed {}",
                        t.word, r.word
                    ));
                }
            }
        }
    }
    Ok(())
}

fn check_value(v: &ValuedWord, problems: &mut Vec<String>, step: usize) {
    if v.word.numeric_value().to_string() != v.value {
        problems.push(format!("step {step}: wrong value {} for {}", v.value, v.word));
    }
}
