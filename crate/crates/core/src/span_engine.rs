//! The filtration `L_0 ⊆ L_1 ⊆ ...` of a finite matrix set, its rank
//! sequence and its generation length.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_linalg::{EchelonBasis, FieldSpec, Insertion, Membership, Scalar, SquareMatrix};
use crate::words::Word;

/// A finite set `{X_1, ..., X_t}` of `n x n` matrices over one field.
/// Letter `i` in a word refers to `mats[i - 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    n: usize,
    field: FieldSpec,
    mats: Vec<SquareMatrix>,
    names: Option<Vec<String>>,
}

impl GeneratorSet {
    pub fn new(
        field: FieldSpec,
        n: usize,
        mats: Vec<SquareMatrix>,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        if mats.is_empty() {
            return Err(Error::EmptyGeneratorSet);
        }
        for m in &mats {
            if m.field() != field {
                return Err(Error::FieldMismatch {
                    left: field.to_string(),
                    right: m.field().to_string(),
                });
            }
            if m.n() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: m.n(),
                });
            }
        }
        if let Some(names) = &names {
            if names.len() != mats.len() {
                return Err(Error::Invalid(format!(
                    "{} names for {} generators",
                    names.len(),
                    mats.len()
                )));
            }
        }
        Ok(GeneratorSet {
            n,
            field,
            mats,
            names,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.mats.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn mats(&self) -> &[SquareMatrix] {
        &self.mats
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// The matrix for a 1-based letter.
    pub fn generator(&self, letter: usize) -> &SquareMatrix {
        &self.mats[letter - 1]
    }

    pub fn word(&self, letters: &[usize]) -> Result<Word> {
        Word::new(letters.to_vec(), self.t())
    }

    /// The product named by `w`; the empty word evaluates to the identity.
    pub fn evaluate(&self, w: &Word) -> Result<SquareMatrix> {
        if w.alphabet() != self.t() {
            return Err(Error::AlphabetMismatch {
                left: w.alphabet(),
                right: self.t(),
            });
        }
        let mut acc = SquareMatrix::identity(self.field, self.n);
        for &l in w.letters() {
            acc = acc.mul(self.generator(l))?;
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug)]
pub struct Filtration {
    n: usize,
    ranks: Vec<usize>,
    levels: Vec<EchelonBasis>,
    new_words_per_level: Vec<Vec<Word>>,
    complete: bool,
}

/// Outcome of [`build_filtration`]. A truncated build stopped at the length
/// cap while the rank was still growing.
#[derive(Clone, Debug)]
pub enum FiltrationBuild {
    Complete(Filtration),
    Truncated(Filtration),
}

impl FiltrationBuild {
    pub fn complete(self) -> Result<Filtration> {
        match self {
            FiltrationBuild::Complete(f) => Ok(f),
            FiltrationBuild::Truncated(f) => Err(Error::Truncated(f.levels.len() - 1)),
        }
    }

    pub fn filtration(&self) -> &Filtration {
        match self {
            FiltrationBuild::Complete(f) | FiltrationBuild::Truncated(f) => f,
        }
    }

    pub fn is_truncated(&self) -> bool {
        matches!(self, FiltrationBuild::Truncated(_))
    }
}

impl Filtration {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `r_0, r_1, ...`. For a complete filtration this runs through `r_c`
    /// followed by one repeated value at the plateau.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// `c(Σ)`: the last level that grew the basis (for a truncated build,
    /// the last level computed).
    pub fn length(&self) -> usize {
        if self.complete {
            self.ranks.len() - 2
        } else {
            self.ranks.len() - 1
        }
    }

    /// Final rank `r_*`.
    pub fn r_star(&self) -> usize {
        *self.ranks.last().expect("r_0 always present")
    }

    /// Deepest level with a stored basis.
    pub fn levels_built(&self) -> usize {
        self.levels.len() - 1
    }

    /// `r_i`, continuing at `r_*` past the plateau.
    pub fn rank_at(&self, level: usize) -> Result<usize> {
        Ok(self.basis_at(level)?.rank())
    }

    /// Echelon basis of `L_level` with word tags.
    pub fn basis_at(&self, level: usize) -> Result<&EchelonBasis> {
        if let Some(b) = self.levels.get(level) {
            return Ok(b);
        }
        if self.complete {
            Ok(self.levels.last().expect("level 0 always present"))
        } else {
            Err(Error::FiltrationTooShallow {
                built: self.levels_built(),
                needed: level,
            })
        }
    }

    pub fn basis(&self) -> &EchelonBasis {
        self.levels.last().expect("level 0 always present")
    }

    /// Words of length exactly `i` that grew the basis at level `i`.
    pub fn new_words_per_level(&self) -> &[Vec<Word>] {
        &self.new_words_per_level
    }

    /// Whether `Σ` generates all of `M_n(k)`.
    pub fn generates_full_algebra(&self) -> bool {
        self.complete && self.r_star() == self.n * self.n
    }

    /// Checks that `L_*` is closed under left multiplication by every
    /// generator, which pins every later level to the plateau.
    pub fn check_closure(&self, g: &GeneratorSet) -> Result<bool> {
        let basis = self.basis();
        for tag in basis.tags() {
            let m = g.evaluate(tag)?;
            for x in g.mats() {
                if !basis.membership(&x.mul(&m)?)?.is_in() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Builds the filtration level by level. Level `i` multiplies each
/// generator on the left of each basis representative that was new at
/// level `i-1`; that suffices because `L_i = L_{i-1} + Σ·(new reps)`.
/// Stops at the first level that adds nothing, or after `max_len` levels
/// (default `n^2`, which always reaches the plateau).
pub fn build_filtration(g: &GeneratorSet, max_len: Option<usize>) -> FiltrationBuild {
    let n = g.n();
    let max_len = max_len.unwrap_or(n * n);
    let mut basis = EchelonBasis::for_matrices(g.field(), n);
    let identity = SquareMatrix::identity(g.field(), n);
    let empty = Word::empty(g.t());
    basis
        .insert(&identity, empty.clone())
        .expect("identity matches the basis field");
    let mut ranks = vec![1];
    let mut levels = vec![basis.clone()];
    let mut new_words_per_level = vec![vec![empty.clone()]];
    let mut frontier = vec![(empty, identity)];
    let mut level = 1;
    let complete = loop {
        if level > max_len {
            break false;
        }
        let mut next = Vec::new();
        for (w, m) in &frontier {
            for letter in 1..=g.t() {
                let prod = g.generator(letter).mul(m).expect("same shape");
                let tag = w.prepend(letter);
                if basis.insert(&prod, tag.clone()).expect("same shape") == Insertion::Grew {
                    next.push((tag, prod));
                }
            }
        }
        ranks.push(basis.rank());
        levels.push(basis.clone());
        new_words_per_level.push(next.iter().map(|(w, _)| w.clone()).collect());
        if next.is_empty() {
            break true;
        }
        frontier = next;
        level += 1;
    };
    let f = Filtration {
        n,
        ranks,
        levels,
        new_words_per_level,
        complete,
    };
    if complete {
        debug_assert!(f.check_closure(g).unwrap_or(false), "plateau is not closed");
        FiltrationBuild::Complete(f)
    } else {
        FiltrationBuild::Truncated(f)
    }
}

/// Complete filtration under the default cap.
pub fn filtration(g: &GeneratorSet) -> Filtration {
    build_filtration(g, None)
        .complete()
        .expect("the n^2 cap always reaches the plateau")
}

/// `c(Σ)`.
pub fn length(g: &GeneratorSet) -> usize {
    filtration(g).length()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Reduction {
    /// `w ≡ sum c_j * tag_j` with every tag shorter than `w`.
    InLower(Vec<(Word, Scalar)>),
    Independent,
}

/// Tests whether the product named by `w` lies in `L_{|w|-1}`.
pub fn reduce_word(g: &GeneratorSet, w: &Word, f: &Filtration) -> Result<Reduction> {
    if w.is_empty() {
        return Ok(Reduction::Independent);
    }
    let basis = f.basis_at(w.len() - 1)?;
    let m = g.evaluate(w)?;
    Ok(match basis.membership(&m)? {
        Membership::In(coeffs) => Reduction::InLower(
            basis
                .tags()
                .iter()
                .cloned()
                .zip(coeffs)
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        ),
        Membership::NotIn(_) => Reduction::Independent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    fn quantum_plane_2() -> GeneratorSet {
        let x = SquareMatrix::from_int_rows(f5(), &[vec![1, 0], vec![0, 4]]);
        let y = SquareMatrix::from_int_rows(f5(), &[vec![0, 1], vec![1, 0]]);
        GeneratorSet::new(f5(), 2, vec![x, y], None).unwrap()
    }

    #[test]
    fn identity_generates_nothing() {
        for n in 2..5 {
            let g = GeneratorSet::new(
                FieldSpec::rational(),
                n,
                vec![SquareMatrix::identity(FieldSpec::rational(), n)],
                None,
            )
            .unwrap();
            let f = filtration(&g);
            assert_eq!(f.ranks(), &[1, 1]);
            assert_eq!(f.length(), 0);
            assert_eq!(f.r_star(), 1);
        }
    }

    #[test]
    fn quantum_plane_n2_ranks() {
        let f = filtration(&quantum_plane_2());
        assert_eq!(f.ranks(), &[1, 3, 4, 4]);
        assert_eq!(f.length(), 2);
        assert!(f.generates_full_algebra());
    }

    #[test]
    fn diagonal_vandermonde() {
        let q = FieldSpec::rational();
        let d = SquareMatrix::from_int_rows(q, &[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]]);
        let g = GeneratorSet::new(q, 3, vec![d], None).unwrap();
        let f = filtration(&g);
        assert_eq!(f.ranks(), &[1, 2, 3, 3]);
        assert_eq!(f.length(), 2);
    }

    #[test]
    fn nilpotent_unit() {
        let q = FieldSpec::rational();
        let g = GeneratorSet::new(q, 2, vec![SquareMatrix::unit(q, 2, 0, 1)], None).unwrap();
        assert_eq!(filtration(&g).ranks(), &[1, 2, 2]);
        assert_eq!(length(&g), 1);
    }

    #[test]
    fn truncation_is_explicit() {
        let build = build_filtration(&quantum_plane_2(), Some(1));
        assert!(build.is_truncated());
        assert_eq!(build.filtration().ranks(), &[1, 3]);
        assert_eq!(build.clone().complete().unwrap_err(), Error::Truncated(1));
        let f = build.filtration();
        assert!(matches!(
            f.basis_at(2),
            Err(Error::FiltrationTooShallow { built: 1, needed: 2 })
        ));
    }

    #[test]
    fn reduce_quantum_plane_words() {
        let g = quantum_plane_2();
        let f = filtration(&g);
        // letter 1 = X, letter 2 = Y; YX is new at length 2
        assert_eq!(
            reduce_word(&g, &g.word(&[2, 1]).unwrap(), &f).unwrap(),
            Reduction::Independent
        );
        // X^2 = I
        let r = reduce_word(&g, &g.word(&[1, 1]).unwrap(), &f).unwrap();
        assert_eq!(r, Reduction::InLower(vec![(Word::empty(2), f5().one())]));
    }

    #[test]
    fn power_reduces_by_char_poly() {
        let q = FieldSpec::rational();
        let a = SquareMatrix::from_int_rows(q, &[vec![2, 1, 0], vec![0, 1, 3], vec![1, 0, 1]]);
        let g = GeneratorSet::new(q, 3, vec![a.clone()], None).unwrap();
        let f = filtration(&g);
        let cp = a.char_poly();
        let Reduction::InLower(terms) = reduce_word(&g, &g.word(&[1, 1, 1]).unwrap(), &f).unwrap()
        else {
            panic!("A^3 must reduce");
        };
        for (w, c) in terms {
            assert_eq!(c, -&cp[w.len()]);
        }
    }

    #[test]
    fn rejects_bad_sets() {
        let q = FieldSpec::rational();
        assert_eq!(
            GeneratorSet::new(q, 1, vec![SquareMatrix::identity(q, 1)], None),
            Err(Error::DimensionTooSmall(1))
        );
        assert_eq!(GeneratorSet::new(q, 2, vec![], None), Err(Error::EmptyGeneratorSet));
        assert!(GeneratorSet::new(q, 2, vec![SquareMatrix::identity(f5(), 2)], None).is_err());
    }
}
