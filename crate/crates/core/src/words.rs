//! Words over the generator alphabet and their combinatorics.
//!
//! A word `i_1 ... i_k` names the product `X_{i_1} ... X_{i_k}`; letters run
//! over `1..=t`. The empty word names the identity.
//!
//! The numeric value of a word reads it as a base-`(t+1)` integer with the
//! leftmost letter most significant. Digit 0 never occurs. For words of
//! equal length this order is exactly the lexicographic order on letters,
//! and replacing any window by a window of larger value makes the whole
//! word larger. Values are only ever compared between words of equal
//! length.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<usize>,
    alphabet: usize,
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.letters.serialize(s)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "()");
        }
        let sep = if self.alphabet < 10 { "" } else { "." };
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(sep))
    }
}

impl Word {
    pub fn new(letters: Vec<usize>, alphabet: usize) -> Result<Self> {
        if let Some(&letter) = letters.iter().find(|&&l| l == 0 || l > alphabet) {
            return Err(Error::LetterOutOfRange { letter, alphabet });
        }
        Ok(Word { letters, alphabet })
    }

    pub fn empty(alphabet: usize) -> Self {
        Word {
            letters: Vec::new(),
            alphabet,
        }
    }

    /// `letter` repeated `len` times.
    pub fn constant(letter: usize, len: usize, alphabet: usize) -> Result<Self> {
        Self::new(vec![letter; len], alphabet)
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Base-`(t+1)` value, leftmost letter most significant.
    pub fn numeric_value(&self) -> BigUint {
        let base = BigUint::from(self.alphabet + 1);
        self.letters
            .iter()
            .fold(BigUint::from(0u32), |acc, &l| acc * &base + BigUint::from(l))
    }

    /// Compares numeric values of two words of the same length and alphabet.
    /// Equal-length base-`(t+1)` numerals compare digit by digit, so this
    /// reduces to comparing letter sequences.
    pub fn cmp_value(&self, other: &Word) -> Result<Ordering> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet,
                right: other.alphabet,
            });
        }
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(self.letters.cmp(&other.letters))
    }

    pub fn k_subwords(&self, k: usize) -> Result<Vec<Word>> {
        if k == 0 {
            return Err(Error::ZeroSubwordLength);
        }
        if k > self.len() {
            return Ok(Vec::new());
        }
        Ok(self
            .letters
            .windows(k)
            .map(|w| Word {
                letters: w.to_vec(),
                alphabet: self.alphabet,
            })
            .collect())
    }

    pub fn census(&self, k: usize) -> Result<SubwordCensus> {
        let windows = self.k_subwords(k)?;
        let total = windows.len();
        let classes: Vec<Word> = windows
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        Ok(SubwordCensus {
            k,
            total,
            distinct: classes.len(),
            classes,
        })
    }

    /// Letters non-increasing left to right, i.e. no `X_i X_j` with `i < j`.
    pub fn is_ordered(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn longest_constant_run(&self) -> usize {
        let mut best = 0;
        let mut run = 0;
        let mut prev = None;
        for &l in &self.letters {
            run = if prev == Some(l) { run + 1 } else { 1 };
            prev = Some(l);
            best = best.max(run);
        }
        best
    }

    /// Contains a constant run of length at least `n`, so Cayley-Hamilton
    /// rewrites it through shorter products.
    pub fn is_ch_reducible(&self, n: usize) -> bool {
        self.longest_constant_run() >= n
    }

    /// Leftmost position of `sub` as a window of `self`.
    pub fn find(&self, sub: &Word) -> Option<usize> {
        if sub.len() > self.len() || sub.is_empty() {
            return None;
        }
        self.letters.windows(sub.len()).position(|w| w == sub.letters())
    }

    /// Replaces the window starting at `pos` by `replacement` (same length).
    pub fn splice(&self, pos: usize, replacement: &Word) -> Word {
        assert!(pos + replacement.len() <= self.len(), "window out of range");
        let mut letters = self.letters.clone();
        letters[pos..pos + replacement.len()].copy_from_slice(replacement.letters());
        Word {
            letters,
            alphabet: self.alphabet,
        }
    }

    pub fn prepend(&self, letter: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.letters);
        Word {
            letters,
            alphabet: self.alphabet,
        }
    }

    /// All words of length `len` over `1..=alphabet`, in increasing numeric
    /// value.
    pub fn all(len: usize, alphabet: usize) -> AllWords {
        AllWords {
            next: if alphabet == 0 && len > 0 {
                None
            } else {
                Some(vec![1; len])
            },
            alphabet,
        }
    }

    /// All ordered (non-increasing) words of length `len`, in increasing
    /// numeric value.
    pub fn ordered(len: usize, alphabet: usize) -> Vec<Word> {
        fn extend(prefix: &mut Vec<usize>, left: usize, max: usize, t: usize, out: &mut Vec<Word>) {
            if left == 0 {
                out.push(Word {
                    letters: prefix.clone(),
                    alphabet: t,
                });
                return;
            }
            for l in 1..=max {
                prefix.push(l);
                extend(prefix, left - 1, l, t, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        extend(&mut Vec::with_capacity(len), len, alphabet, alphabet, &mut out);
        out
    }

    /// Number of words of length `len`, saturating.
    pub fn count(len: usize, alphabet: usize) -> u128 {
        (0..len).fold(1u128, |acc, _| acc.saturating_mul(alphabet as u128))
    }
}

pub struct AllWords {
    next: Option<Vec<usize>>,
    alphabet: usize,
}

impl Iterator for AllWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ[i] < self.alphabet {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = 1;
        }
        Some(Word {
            letters: current,
            alphabet: self.alphabet,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubwordCensus {
    pub k: usize,
    pub total: usize,
    pub distinct: usize,
    /// Formally distinct windows in increasing numeric value.
    pub classes: Vec<Word>,
}

/// The count `N` such that every ordered, non-CH-reducible word of length
/// `2n-1` has at least `N + 2` formally distinct `k`-subwords.
pub fn subword_threshold(n: usize, k: usize) -> Result<usize> {
    let max = 2 * n - 2;
    if n < 2 || k == 0 || k > max {
        return Err(Error::SubwordLengthOutOfRange { n, k, max });
    }
    Ok(if k < n { k } else { 2 * n - k - 2 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusViolation {
    pub word: Word,
    pub k: usize,
    pub distinct: usize,
    pub threshold: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub t: usize,
    /// Words of length `2n-1` visited before filtering.
    pub words_enumerated: u128,
    /// Ordered words with every constant run shorter than `n`.
    pub words_checked: usize,
    /// Smallest `distinct - (N + 2)` seen; `None` when no word qualified.
    pub min_slack: Option<i64>,
    pub violations: Vec<CensusViolation>,
}

/// Default cap on `t^(2n-1)` for the exhaustive check.
pub const CENSUS_ENUMERATION_CAP: u128 = 50_000_000;

/// Checks the subword lower bound on every ordered word of length `2n-1`
/// whose constant runs are all shorter than `n`, for every `k` in
/// `1..=2n-2`.
pub fn verify_census_exhaustive(n: usize, t: usize) -> Result<CensusReport> {
    verify_census_with_cap(n, t, CENSUS_ENUMERATION_CAP)
}

pub fn verify_census_with_cap(n: usize, t: usize, cap: u128) -> Result<CensusReport> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let len = 2 * n - 1;
    let requested = Word::count(len, t);
    if requested > cap {
        return Err(Error::EnumerationCap { requested, cap });
    }
    let thresholds: Vec<usize> = (1..=2 * n - 2)
        .map(|k| subword_threshold(n, k))
        .collect::<Result<_>>()?;
    let mut report = CensusReport {
        n,
        t,
        words_enumerated: 0,
        words_checked: 0,
        min_slack: None,
        violations: Vec::new(),
    };
    for word in Word::all(len, t) {
        report.words_enumerated += 1;
        if !word.is_ordered() || word.is_ch_reducible(n) {
            continue;
        }
        report.words_checked += 1;
        for (k, &threshold) in (1..).zip(&thresholds) {
            let distinct = word.census(k)?.distinct;
            let slack = distinct as i64 - (threshold as i64 + 2);
            report.min_slack = Some(report.min_slack.map_or(slack, |m| m.min(slack)));
            if slack < 0 {
                report.violations.push(CensusViolation {
                    word: word.clone(),
                    k,
                    distinct,
                    threshold,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[usize], t: usize) -> Word {
        Word::new(letters.to_vec(), t).unwrap()
    }

    #[test]
    fn numeric_values() {
        assert_eq!(w(&[2, 1], 2).numeric_value(), BigUint::from(7u32));
        assert_eq!(w(&[1], 2).numeric_value(), BigUint::from(1u32));
        assert_eq!(w(&[1, 2], 2).numeric_value(), BigUint::from(5u32));
        assert_eq!(Word::empty(3).numeric_value(), BigUint::from(0u32));
        assert_eq!(w(&[1, 2], 2).cmp_value(&w(&[2, 1], 2)).unwrap(), Ordering::Less);
    }

    #[test]
    fn cross_length_comparison_rejected() {
        assert!(matches!(
            w(&[1], 2).cmp_value(&w(&[1, 1], 2)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn letters_validated() {
        assert!(matches!(
            Word::new(vec![0], 2),
            Err(Error::LetterOutOfRange { letter: 0, .. })
        ));
        assert!(Word::new(vec![3], 2).is_err());
    }

    #[test]
    fn subwords() {
        assert_eq!(
            w(&[1, 2, 1], 2).k_subwords(2).unwrap(),
            vec![w(&[1, 2], 2), w(&[2, 1], 2)]
        );
        assert_eq!(
            w(&[1, 1, 1], 2).k_subwords(2).unwrap(),
            vec![w(&[1, 1], 2), w(&[1, 1], 2)]
        );
        assert_eq!(
            w(&[3, 3, 2, 2, 1], 3).k_subwords(2).unwrap(),
            vec![w(&[3, 3], 3), w(&[3, 2], 3), w(&[2, 2], 3), w(&[2, 1], 3)]
        );
        assert!(w(&[1], 2).k_subwords(2).unwrap().is_empty());
        assert_eq!(w(&[1], 2).k_subwords(0), Err(Error::ZeroSubwordLength));
    }

    #[test]
    fn census_counts() {
        let c = w(&[3, 3, 2, 2, 1], 3).census(2).unwrap();
        assert_eq!((c.total, c.distinct), (4, 4));
        assert_eq!(c.classes[0], w(&[2, 1], 3));
        let c = w(&[1, 1, 1, 1], 1).census(2).unwrap();
        assert_eq!((c.total, c.distinct), (3, 1));
        // length 5 = 2n-1 for n = 3, ordered, runs < 3: distinct >= N + 2 with N = k = 2
        assert!(4 >= subword_threshold(3, 2).unwrap() + 2);
    }

    #[test]
    fn ordered_and_runs() {
        assert!(w(&[3, 2, 2, 1], 3).is_ordered());
        assert!(!w(&[1, 2], 2).is_ordered());
        assert!(Word::empty(2).is_ordered());
        assert!(w(&[2], 2).is_ordered());
        assert_eq!(w(&[2, 2, 2, 1], 2).longest_constant_run(), 3);
        assert_eq!(w(&[1, 2, 1], 2).longest_constant_run(), 1);
        assert_eq!(w(&[1, 1, 1, 1, 1], 1).longest_constant_run(), 5);
        assert_eq!(Word::empty(1).longest_constant_run(), 0);
    }

    #[test]
    fn thresholds() {
        assert_eq!(subword_threshold(5, 3).unwrap(), 3);
        assert_eq!(subword_threshold(5, 5).unwrap(), 3);
        assert_eq!(subword_threshold(5, 8).unwrap(), 0);
        assert!(subword_threshold(5, 9).is_err());
        assert!(subword_threshold(5, 0).is_err());
    }

    #[test]
    fn all_words_in_value_order() {
        let words: Vec<Word> = Word::all(2, 2).collect();
        assert_eq!(words, vec![w(&[1, 1], 2), w(&[1, 2], 2), w(&[2, 1], 2), w(&[2, 2], 2)]);
        assert_eq!(Word::all(0, 3).count(), 1);
        assert_eq!(Word::all(3, 3).count(), 27);
        let ordered: Vec<Word> = Word::all(3, 3).filter(Word::is_ordered).collect();
        assert_eq!(Word::ordered(3, 3), ordered);
        assert_eq!(Word::ordered(0, 2), vec![Word::empty(2)]);
    }

    #[test]
    fn census_small_cases() {
        let r = verify_census_exhaustive(2, 2).unwrap();
        assert!(r.violations.is_empty());
        assert_eq!(r.words_enumerated, 8);
        let r = verify_census_exhaustive(3, 3).unwrap();
        assert!(r.violations.is_empty());
        assert!(r.min_slack.unwrap() >= 0);
        // every ordered 5-letter word over {1,2} is 2^a 1^b with max(a,b) >= 3
        let r = verify_census_exhaustive(3, 2).unwrap();
        assert_eq!(r.words_checked, 0);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn census_cap() {
        assert!(matches!(
            verify_census_with_cap(4, 3, 100),
            Err(Error::EnumerationCap { .. })
        ));
    }
}
