//! Generator families: the quantum plane pair, irreducible `sl_2`
//! representations, seeded random sets, and a search harness that records
//! lengths of commutator-closed sets against the `2n-3` bound.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{analyze, AnalysisOptions};
use crate::error::{Error, Result};
use crate::exact_linalg::{is_prime, EchelonBasis, FieldSpec, Insertion, SquareMatrix};
use crate::pbw::{check_pbw_with_cap, PbwVerdict};
use crate::span_engine::{filtration, GeneratorSet};
use crate::words::Word;

/// Primes are searched below this bound.
pub const PRIME_SEARCH_CAP: u64 = 1 << 32;

/// A realization of `XY = qYX` over `F_p`, `q` a primitive `n`-th root of
/// unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumPlaneSpec {
    pub n: usize,
    pub p: u64,
    pub q: u64,
}

/// Smallest prime `p > n` with `p ≡ 1 (mod n)`.
pub fn smallest_prime_one_mod(n: usize) -> Result<u64> {
    let n64 = n as u64;
    let mut p = n64 + 1;
    while p < PRIME_SEARCH_CAP {
        if is_prime(p) {
            return Ok(p);
        }
        p += n64;
    }
    Err(Error::NoSuitablePrime {
        n,
        cap: PRIME_SEARCH_CAP,
    })
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether `q` has multiplicative order exactly `n` modulo `p`.
pub fn is_primitive_root_of_unity(q: u64, n: usize, p: u64) -> bool {
    let f = FieldSpec::prime(p).expect("prime modulus");
    let q = f.from_i64(q as i64);
    if !q.pow(n as u64).is_one() {
        return false;
    }
    prime_factors(n as u64)
        .into_iter()
        .all(|d| !q.pow(n as u64 / d).is_one())
}

impl QuantumPlaneSpec {
    /// Picks `p` (default: smallest prime `≡ 1 mod n` above `n`) and the
    /// smallest primitive `n`-th root of unity in `F_p`.
    pub fn new(n: usize, p: Option<u64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        let p = match p {
            Some(p) => p,
            None => smallest_prime_one_mod(n)?,
        };
        FieldSpec::prime(p)?;
        if p % n as u64 != 1 {
            return Err(Error::Invalid(format!("{p} is not 1 mod {n}")));
        }
        let q = (2..p)
            .find(|&q| is_primitive_root_of_unity(q, n, p))
            .ok_or_else(|| Error::Invalid(format!("no primitive {n}-th root mod {p}")))?;
        Ok(QuantumPlaneSpec { n, p, q })
    }

    pub fn field(&self) -> FieldSpec {
        FieldSpec::prime(self.p).expect("checked at construction")
    }

    /// `X = diag(1, q, ..., q^{n-1})` (letter 1) and the cyclic shift `Y`
    /// with ones at `(1, n)` and `(i+1, i)` (letter 2).
    pub fn generators(&self) -> Result<GeneratorSet> {
        let n = self.n;
        let f = self.field();
        let q = f.from_i64(self.q as i64);
        let x = SquareMatrix::diagonal(f, (0..n).map(|i| q.pow(i as u64)).collect());
        let mut y = SquareMatrix::zero(f, n);
        y.set(0, n - 1, f.one());
        for i in 0..n - 1 {
            y.set(i + 1, i, f.one());
        }
        if x.mul(&y)? != y.mul(&x)?.scale(&q) {
            return Err(Error::Invalid("XY != qYX".into()));
        }
        GeneratorSet::new(f, n, vec![x, y], Some(vec!["X".into(), "Y".into()]))
    }
}

pub fn quantum_plane(n: usize, p: Option<u64>) -> Result<GeneratorSet> {
    QuantumPlaneSpec::new(n, p)?.generators()
}

/// The `n`-dimensional irreducible representation of `sl_2` over `Q`:
/// letters 1, 2, 3 are `E`, `F`, `H` with `H = diag(n-1, n-3, ..., 1-n)`,
/// `F` the unit subdiagonal and `E_{i-1,i} = i(n-i)` (0-based `i`).
pub fn sl2_irrep(n: usize) -> Result<GeneratorSet> {
    sl2_irrep_in(FieldSpec::rational(), n)
}

pub fn sl2_irrep_in(field: FieldSpec, n: usize) -> Result<GeneratorSet> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let m = n as i64 - 1;
    let mut e = SquareMatrix::zero(field, n);
    let mut fm = SquareMatrix::zero(field, n);
    for i in 1..n {
        let ii = i as i64;
        e.set(i - 1, i, field.from_i64(ii * (m - ii + 1)));
        fm.set(i, i - 1, field.one());
    }
    let h = SquareMatrix::diagonal(
        field,
        (0..n).map(|i| field.from_i64(m - 2 * i as i64)).collect(),
    );
    let two = field.from_i64(2);
    if e.commutator(&fm)? != h
        || h.commutator(&e)? != e.scale(&two)
        || h.commutator(&fm)? != fm.scale(&-&two)
    {
        return Err(Error::Invalid("sl2 bracket relations fail".into()));
    }
    GeneratorSet::new(
        field,
        n,
        vec![e, fm, h],
        Some(vec!["E".into(), "F".into(), "H".into()]),
    )
}

/// Seeded pseudorandom set. Prime-field entries are uniform residues;
/// rational entries are uniform integers in `-3..=3`.
pub fn random_set(n: usize, t: usize, field: FieldSpec, seed: u64) -> Result<GeneratorSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mats = (0..t)
        .map(|_| {
            let entries = (0..n * n)
                .map(|_| match field.modulus() {
                    Some(p) => field.from_i64(rng.gen_range(0..p) as i64),
                    None => field.from_i64(rng.gen_range(-3..=3)),
                })
                .collect();
            SquareMatrix::new(field, n, entries)
        })
        .collect::<Result<Vec<_>>>()?;
    GeneratorSet::new(field, n, mats, None)
}

/// Whether every commutator `[X_i, X_j]` lies in the linear span of the
/// generators (identity not included).
pub fn is_lie_closed(g: &GeneratorSet) -> Result<bool> {
    let mut span = EchelonBasis::for_matrices(g.field(), g.n());
    for (i, m) in g.mats().iter().enumerate() {
        span.insert(m, Word::new(vec![i + 1], g.t())?)?;
    }
    for (i, a) in g.mats().iter().enumerate() {
        for b in &g.mats()[i + 1..] {
            if !span.membership(&a.commutator(b)?)?.is_in() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A basis of the Lie algebra generated by `g` under commutators.
pub fn lie_closure(g: &GeneratorSet) -> Result<GeneratorSet> {
    let mut span = EchelonBasis::for_matrices(g.field(), g.n());
    let mut basis: Vec<SquareMatrix> = Vec::new();
    for m in g.mats() {
        if span.insert(m, Word::empty(1))? == Insertion::Grew {
            basis.push(m.clone());
        }
    }
    if basis.is_empty() {
        return Err(Error::EmptyGeneratorSet);
    }
    let mut i = 0;
    while i < basis.len() {
        for j in 0..i {
            let br = basis[j].commutator(&basis[i])?;
            if span.insert(&br, Word::empty(1))? == Insertion::Grew {
                basis.push(br);
            }
        }
        i += 1;
    }
    GeneratorSet::new(g.field(), g.n(), basis, None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyResult {
    pub family: String,
    pub n: usize,
    pub t: usize,
    pub field: FieldSpec,
    pub seed: Option<u64>,
    pub ranks: Vec<usize>,
    pub c: usize,
    pub r_star: usize,
    /// `2n - 2 - c`
    pub gap_2n2: i64,
    /// `2n - 3 - c`
    pub gap_2n3: i64,
    pub lie_closed: bool,
    /// `None` when the check exceeded its word cap.
    pub pbw_holds: Option<bool>,
    pub consistent: bool,
}

/// Word cap used for ordered-rewriting checks inside the search.
pub const SEARCH_PBW_CAP: u128 = 1 << 18;

pub fn measure(family: &str, g: &GeneratorSet, seed: Option<u64>) -> Result<FamilyResult> {
    let f = filtration(g);
    let n = g.n();
    let pbw = check_pbw_with_cap(g, 2 * n - 1, &f, SEARCH_PBW_CAP)?;
    let pbw_holds = match pbw.verdict {
        PbwVerdict::Holds => Some(true),
        PbwVerdict::Fails => Some(false),
        PbwVerdict::Truncated => None,
    };
    let lie_closed = is_lie_closed(g)?;
    let report = analyze(
        &f,
        AnalysisOptions {
            pbw_holds,
            claim_proper_subalgebra: None,
            lie_closed: Some(lie_closed),
        },
    )?;
    let c = f.length();
    Ok(FamilyResult {
        family: family.to_string(),
        n,
        t: g.t(),
        field: g.field(),
        seed,
        ranks: f.ranks().to_vec(),
        c,
        r_star: f.r_star(),
        gap_2n2: (2 * n - 2) as i64 - c as i64,
        gap_2n3: (2 * n - 3) as i64 - c as i64,
        lie_closed,
        pbw_holds,
        consistent: report.consistent,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SharpnessFamily {
    Sl2,
    /// Lie closure of `t` seeded random matrices.
    RandomLieClosure { t: usize, field: FieldSpec },
    /// Seeded random sets, kept only when already commutator-closed.
    RandomFiltered { t: usize, field: FieldSpec },
}

impl SharpnessFamily {
    pub fn id(&self) -> &'static str {
        match self {
            SharpnessFamily::Sl2 => "sl2",
            SharpnessFamily::RandomLieClosure { .. } => "random-lie-closure",
            SharpnessFamily::RandomFiltered { .. } => "random-filtered",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub results: Vec<FamilyResult>,
    /// Largest `c` among commutator-closed sets, per `n`.
    pub max_c_per_n: BTreeMap<usize, usize>,
    /// Candidates dropped by the commutator-closure filter.
    pub rejected: usize,
    /// Stopped early; results are partial.
    pub budget_exhausted: bool,
}

/// Measures commutator-closed candidates. `budget` bounds the number of
/// filtration builds; `seeds_per_n` candidates are drawn per `n` for the
/// random families (seeds `0..seeds_per_n`). Pairs in `skip` were already
/// recorded and are not rebuilt.
pub fn search_sharpness(
    family: SharpnessFamily,
    n_range: RangeInclusive<usize>,
    budget: usize,
    seeds_per_n: u64,
    skip: &BTreeSet<(usize, Option<u64>)>,
) -> Result<SearchOutcome> {
    search_sharpness_with(family, n_range, budget, seeds_per_n, skip, &mut |_| Ok(()))
}

/// As [`search_sharpness`], handing each result to `record` as soon as it
/// is measured.
pub fn search_sharpness_with(
    family: SharpnessFamily,
    n_range: RangeInclusive<usize>,
    budget: usize,
    seeds_per_n: u64,
    skip: &BTreeSet<(usize, Option<u64>)>,
    record: &mut dyn FnMut(&FamilyResult) -> Result<()>,
) -> Result<SearchOutcome> {
    let mut out = SearchOutcome {
        results: Vec::new(),
        max_c_per_n: BTreeMap::new(),
        rejected: 0,
        budget_exhausted: false,
    };
    let mut spent = 0;
    for n in n_range {
        let candidates: Vec<Option<u64>> = match family {
            SharpnessFamily::Sl2 => vec![None],
            _ => (0..seeds_per_n).map(Some).collect(),
        };
        for seed in candidates {
            if skip.contains(&(n, seed)) {
                continue;
            }
            if spent >= budget {
                out.budget_exhausted = true;
                return Ok(out);
            }
            let g = match (family, seed) {
                (SharpnessFamily::Sl2, _) => sl2_irrep(n)?,
                (SharpnessFamily::RandomLieClosure { t, field }, Some(s)) => {
                    lie_closure(&random_set(n, t, field, s)?)?
                }
                (SharpnessFamily::RandomFiltered { t, field }, Some(s)) => {
                    random_set(n, t, field, s)?
                }
                _ => unreachable!("random families always carry a seed"),
            };
            if !is_lie_closed(&g)? {
                out.rejected += 1;
                continue;
            }
            spent += 1;
            let r = measure(family.id(), &g, seed)?;
            record(&r)?;
            let best = out.max_c_per_n.entry(n).or_insert(r.c);
            *best = (*best).max(r.c);
            out.results.push(r);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::span_engine::length;

    #[test]
    fn prime_selection() {
        assert_eq!(smallest_prime_one_mod(2).unwrap(), 3);
        assert_eq!(smallest_prime_one_mod(3).unwrap(), 7);
        assert_eq!(smallest_prime_one_mod(4).unwrap(), 5);
        assert_eq!(smallest_prime_one_mod(5).unwrap(), 11);
        assert_eq!(smallest_prime_one_mod(6).unwrap(), 7);
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(QuantumPlaneSpec::new(2, Some(5)).unwrap().q, 4);
        assert_eq!(QuantumPlaneSpec::new(3, Some(7)).unwrap().q, 2);
        assert_eq!(QuantumPlaneSpec::new(4, Some(13)).unwrap().q, 5);
        assert!(is_primitive_root_of_unity(4, 3, 7));
        assert!(!is_primitive_root_of_unity(6, 3, 7));
        assert!(!is_primitive_root_of_unity(1, 3, 7));
        assert!(QuantumPlaneSpec::new(3, Some(11)).is_err());
        assert!(QuantumPlaneSpec::new(3, Some(9)).is_err());
    }

    #[test]
    fn quantum_plane_n2_f5() {
        let g = quantum_plane(2, Some(5)).unwrap();
        let f = g.field();
        assert_eq!(g.mats()[0], SquareMatrix::from_int_rows(f, &[vec![1, 0], vec![0, 4]]));
        assert_eq!(g.mats()[1], SquareMatrix::from_int_rows(f, &[vec![0, 1], vec![1, 0]]));
        assert_eq!(length(&g), 2);
    }

    #[test]
    fn sl2_small() {
        let g = sl2_irrep(2).unwrap();
        let q = FieldSpec::rational();
        assert_eq!(g.mats()[0], SquareMatrix::from_int_rows(q, &[vec![0, 1], vec![0, 0]]));
        assert_eq!(g.mats()[1], SquareMatrix::from_int_rows(q, &[vec![0, 0], vec![1, 0]]));
        assert_eq!(g.mats()[2], SquareMatrix::from_int_rows(q, &[vec![1, 0], vec![0, -1]]));
        let g3 = sl2_irrep(3).unwrap();
        assert_eq!(g3.mats()[2], SquareMatrix::from_int_rows(q, &[vec![2, 0, 0], vec![0, 0, 0], vec![0, 0, -2]]));
        for n in 2..=6 {
            assert!(is_lie_closed(&sl2_irrep(n).unwrap()).unwrap());
        }
    }

    #[test]
    fn random_sets_are_reproducible() {
        let f = FieldSpec::prime(5).unwrap();
        assert_eq!(random_set(3, 2, f, 7).unwrap(), random_set(3, 2, f, 7).unwrap());
        assert_ne!(random_set(3, 2, f, 7).unwrap(), random_set(3, 2, f, 8).unwrap());
    }

    #[test]
    fn closure_filter() {
        let f = FieldSpec::prime(5).unwrap();
        let g = random_set(3, 2, f, 1).unwrap();
        assert!(!is_lie_closed(&g).unwrap());
        assert!(is_lie_closed(&lie_closure(&g).unwrap()).unwrap());
        assert!(!is_lie_closed(&quantum_plane(3, None).unwrap()).unwrap());
    }

    #[test]
    fn search_basics() {
        let none = BTreeSet::new();
        let empty = search_sharpness(SharpnessFamily::Sl2, 3..=2, 10, 0, &none).unwrap();
        assert!(empty.results.is_empty());
        let sl2 = search_sharpness(SharpnessFamily::Sl2, 2..=4, 10, 0, &none).unwrap();
        assert_eq!(sl2.results.len(), 3);
        assert!(sl2.results.iter().all(|r| r.gap_2n3 >= 0 && r.consistent));
        let partial = search_sharpness(SharpnessFamily::Sl2, 2..=4, 1, 0, &none).unwrap();
        assert!(partial.budget_exhausted);
        assert_eq!(partial.results.len(), 1);
        let filtered = search_sharpness(
            SharpnessFamily::RandomFiltered {
                t: 2,
                field: FieldSpec::prime(5).unwrap(),
            },
            3..=3,
            10,
            5,
            &none,
        )
        .unwrap();
        assert_eq!(filtered.rejected + filtered.results.len(), 5);
    }
}
