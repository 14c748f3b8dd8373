//! Checker for the ordered-rewriting property: every product of length `l`
//! equals, modulo `L_{l-1}`, a combination of ordered products of length
//! `l` whose numeric value is at least its own.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_linalg::{EchelonBasis, Membership, Scalar, SquareMatrix};
use crate::span_engine::{Filtration, GeneratorSet};
use crate::words::Word;

/// Cap on `t^l` words examined at a single length.
pub const PBW_WORD_CAP: u128 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PbwVerdict {
    Holds,
    Fails,
    /// Stopped at the enumeration cap; `checked_up_to` is the last length
    /// fully checked.
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PbwCounterexample {
    pub word: Word,
    pub length: usize,
    /// `dim L_{l-1}`.
    pub lower_rank: usize,
    /// Ordered words of length `l` with value above `word`.
    pub larger_ordered: usize,
    /// Rank of `L_{l-1}` plus those ordered words.
    pub span_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PbwReport {
    pub checked_up_to: usize,
    pub verdict: PbwVerdict,
    pub counterexample: Option<PbwCounterexample>,
    /// Non-ordered words tested by an explicit solve.
    pub words_solved: u64,
}

impl PbwReport {
    pub fn holds(&self) -> bool {
        self.verdict == PbwVerdict::Holds
    }
}

/// Default checking depth `2n - 1`.
pub fn default_up_to(g: &GeneratorSet) -> usize {
    2 * g.n() - 1
}

pub fn check_pbw(g: &GeneratorSet, up_to: usize, f: &Filtration) -> Result<PbwReport> {
    check_pbw_with_cap(g, up_to, f, PBW_WORD_CAP)
}

pub fn check_pbw_with_cap(
    g: &GeneratorSet,
    up_to: usize,
    f: &Filtration,
    cap: u128,
) -> Result<PbwReport> {
    if up_to > 0 {
        // L_{up_to - 1} and the full rank of L_{up_to} are both needed.
        f.basis_at(up_to)?;
    }
    let mut report = PbwReport {
        checked_up_to: up_to.min(1),
        verdict: PbwVerdict::Holds,
        counterexample: None,
        words_solved: 0,
    };
    for len in 2..=up_to {
        if g.t() == 1 {
            // every word over one letter is ordered
            report.checked_up_to = len;
            continue;
        }
        let requested = Word::count(len, g.t());
        if requested > cap {
            report.verdict = PbwVerdict::Truncated;
            return Ok(report);
        }
        if let Some(ce) = check_length(g, len, f, &mut report.words_solved)? {
            report.verdict = PbwVerdict::Fails;
            report.counterexample = Some(ce);
            return Ok(report);
        }
        report.checked_up_to = len;
    }
    Ok(report)
}

/// Walks all words of length `len` in decreasing value. Ordered words join
/// the span as they are met; each non-ordered word is tested against
/// `L_{len-1}` plus the ordered words already seen, which are exactly the
/// ordered words of larger value. Once that span reaches `dim L_len` every
/// remaining word passes.
fn check_length(
    g: &GeneratorSet,
    len: usize,
    f: &Filtration,
    solved: &mut u64,
) -> Result<Option<PbwCounterexample>> {
    let lower = f.basis_at(len - 1)?;
    let target_rank = f.rank_at(len)?;
    let mut state = Walk {
        g,
        basis: lower.clone(),
        lower_rank: lower.rank(),
        larger_ordered: 0,
        target_rank,
        solved,
        failure: None,
    };
    let mut prefix = Vec::with_capacity(len);
    let id = SquareMatrix::identity(g.field(), g.n());
    state.descend(&mut prefix, &id, len)?;
    Ok(state.failure)
}

struct Walk<'a> {
    g: &'a GeneratorSet,
    basis: EchelonBasis,
    lower_rank: usize,
    larger_ordered: usize,
    target_rank: usize,
    solved: &'a mut u64,
    failure: Option<PbwCounterexample>,
}

impl Walk<'_> {
    /// Returns `false` once the walk can stop (saturated or failed).
    fn descend(&mut self, prefix: &mut Vec<usize>, prod: &SquareMatrix, left: usize) -> Result<bool> {
        if left == 0 {
            return self.visit(prefix, prod);
        }
        for letter in (1..=self.g.t()).rev() {
            let next = prod.mul(self.g.generator(letter))?;
            prefix.push(letter);
            let go_on = self.descend(prefix, &next, left - 1)?;
            prefix.pop();
            if !go_on {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn visit(&mut self, letters: &[usize], prod: &SquareMatrix) -> Result<bool> {
        let word = Word::new(letters.to_vec(), self.g.t())?;
        if word.is_ordered() {
            self.basis.insert(prod, word)?;
            self.larger_ordered += 1;
        } else {
            *self.solved += 1;
            if !self.basis.membership(prod)?.is_in() {
                self.failure = Some(PbwCounterexample {
                    length: word.len(),
                    word,
                    lower_rank: self.lower_rank,
                    larger_ordered: self.larger_ordered,
                    span_rank: self.basis.rank(),
                });
                return Ok(false);
            }
        }
        Ok(self.basis.rank() < self.target_rank)
    }
}

/// Expresses `u` modulo `L_{|u|-1}` over ordered words of the same length
/// and value at least `value(u)`. Returns `None` when no such expression
/// exists. Zero coefficients are dropped.
pub fn ordered_expression(
    g: &GeneratorSet,
    u: &Word,
    f: &Filtration,
) -> Result<Option<Vec<(Word, Scalar)>>> {
    if u.is_ordered() {
        return Ok(Some(vec![(u.clone(), g.field().one())]));
    }
    let (basis, lower_rank) = larger_ordered_span(g, u, f)?;
    match basis.membership(&g.evaluate(u)?)? {
        Membership::In(coeffs) => Ok(Some(
            basis.tags()[lower_rank..]
                .iter()
                .cloned()
                .zip(coeffs.into_iter().skip(lower_rank))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        )),
        Membership::NotIn(_) => Ok(None),
    }
}

fn larger_ordered_span(
    g: &GeneratorSet,
    u: &Word,
    f: &Filtration,
) -> Result<(EchelonBasis, usize)> {
    if u.is_empty() {
        return Err(Error::Invalid("the empty word is ordered".into()));
    }
    let mut basis = f.basis_at(u.len() - 1)?.clone();
    let lower_rank = basis.rank();
    for w in Word::ordered(u.len(), g.t()).into_iter().rev() {
        if w.letters() <= u.letters() {
            break;
        }
        let m = g.evaluate(&w)?;
        basis.insert(&m, w)?;
    }
    Ok((basis, lower_rank))
}

/// Re-solves a stored counterexample from scratch; `true` when the word is
/// still outside `L_{l-1}` plus the larger ordered words.
pub fn replay_counterexample(
    g: &GeneratorSet,
    ce: &PbwCounterexample,
    f: &Filtration,
) -> Result<bool> {
    if ce.word.is_ordered() {
        return Ok(false);
    }
    let (basis, _) = larger_ordered_span(g, &ce.word, f)?;
    Ok(!basis.membership(&g.evaluate(&ce.word)?)?.is_in())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::FieldSpec;
    use crate::span_engine::filtration;

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    fn quantum_plane_2() -> GeneratorSet {
        let x = SquareMatrix::from_int_rows(f5(), &[vec![1, 0], vec![0, 4]]);
        let y = SquareMatrix::from_int_rows(f5(), &[vec![0, 1], vec![1, 0]]);
        GeneratorSet::new(f5(), 2, vec![x, y], None).unwrap()
    }

    #[test]
    fn single_generator_holds() {
        let a = SquareMatrix::from_int_rows(f5(), &[vec![1, 2], vec![3, 4]]);
        let g = GeneratorSet::new(f5(), 2, vec![a], None).unwrap();
        let f = filtration(&g);
        let r = check_pbw(&g, 3, &f).unwrap();
        assert!(r.holds());
        assert_eq!(r.checked_up_to, 3);
    }

    #[test]
    fn quantum_plane_holds() {
        let g = quantum_plane_2();
        let f = filtration(&g);
        let r = check_pbw(&g, 3, &f).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.checked_up_to, 3);
        // XY = q YX: [1,2] rewrites onto the larger ordered word [2,1]
        let expr = ordered_expression(&g, &g.word(&[1, 2]).unwrap(), &f)
            .unwrap()
            .unwrap();
        assert_eq!(expr, vec![(g.word(&[2, 1]).unwrap(), f5().from_i64(4))]);
    }

    #[test]
    fn unit_pair_word_passes() {
        let q = FieldSpec::rational();
        let e12 = SquareMatrix::unit(q, 2, 0, 1);
        let e21 = SquareMatrix::unit(q, 2, 1, 0);
        let g = GeneratorSet::new(q, 2, vec![e12, e21], None).unwrap();
        let f = filtration(&g);
        // E12 E21 = E11 = I - E21 E12
        let expr = ordered_expression(&g, &g.word(&[1, 2]).unwrap(), &f)
            .unwrap()
            .unwrap();
        assert_eq!(expr, vec![(g.word(&[2, 1]).unwrap(), q.from_i64(-1))]);
    }

    #[test]
    fn failure_is_replayable() {
        // a = E11, b = E12 + E23: ab = E12, ba = 0, b^2 = E13, and E12 is
        // outside span{I, E11, E12 + E23, E13}.
        let q = FieldSpec::rational();
        let a = SquareMatrix::from_int_rows(q, &[vec![1, 0, 0], vec![0, 0, 0], vec![0, 0, 0]]);
        let b = SquareMatrix::from_int_rows(q, &[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]);
        let g = GeneratorSet::new(q, 3, vec![a, b], None).unwrap();
        let f = filtration(&g);
        let r = check_pbw(&g, 5, &f).unwrap();
        assert_eq!(r.verdict, PbwVerdict::Fails);
        let ce = r.counterexample.unwrap();
        assert!(!ce.word.is_ordered());
        assert!(replay_counterexample(&g, &ce, &f).unwrap());
        assert_eq!(ordered_expression(&g, &ce.word, &f).unwrap(), None);
    }

    #[test]
    fn cap_truncates() {
        let g = quantum_plane_2();
        let f = filtration(&g);
        let r = check_pbw_with_cap(&g, 3, &f, 4).unwrap();
        assert_eq!(r.verdict, PbwVerdict::Truncated);
        assert_eq!(r.checked_up_to, 2);
    }
}
