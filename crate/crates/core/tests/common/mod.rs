//! Reference implementations used as oracles. They share no code with the
//! library beyond reading scalars out of its matrices.

#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{One, Zero};

use matlen::exact_linalg::{Scalar, SquareMatrix};
use matlen::span_engine::GeneratorSet;

/// Field element in the oracle's own arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub enum El {
    Q(BigRational),
    P(u64, u64),
}

impl El {
    pub fn from_scalar(s: &Scalar) -> El {
        match s.as_rational() {
            Some(r) => El::Q(r.clone()),
            None => {
                let p = s.field().modulus().unwrap();
                El::P(s.to_string().parse().unwrap(), p)
            }
        }
    }

    pub fn zero_like(&self) -> El {
        match self {
            El::Q(_) => El::Q(BigRational::zero()),
            El::P(_, p) => El::P(0, *p),
        }
    }

    pub fn one_like(&self) -> El {
        match self {
            El::Q(_) => El::Q(BigRational::one()),
            El::P(_, p) => El::P(1, *p),
        }
    }

    pub fn int_like(&self, v: i64) -> El {
        match self {
            El::Q(_) => El::Q(BigRational::from_integer(v.into())),
            El::P(_, p) => El::P(v.rem_euclid(*p as i64) as u64, *p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            El::Q(r) => r.is_zero(),
            El::P(v, _) => *v == 0,
        }
    }

    pub fn add(&self, o: &El) -> El {
        match (self, o) {
            (El::Q(a), El::Q(b)) => El::Q(a + b),
            (El::P(a, p), El::P(b, _)) => El::P((a + b) % p, *p),
            _ => panic!("mixed fields"),
        }
    }

    pub fn neg(&self) -> El {
        match self {
            El::Q(a) => El::Q(-a),
            El::P(a, p) => El::P((p - a) % p, *p),
        }
    }

    pub fn sub(&self, o: &El) -> El {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &El) -> El {
        match (self, o) {
            (El::Q(a), El::Q(b)) => El::Q(a * b),
            (El::P(a, p), El::P(b, _)) => El::P(((*a as u128 * *b as u128) % *p as u128) as u64, *p),
            _ => panic!("mixed fields"),
        }
    }

    /// Inverse by exhaustive search over `F_p`, or `1/r` over `Q`.
    pub fn inv(&self) -> El {
        match self {
            El::Q(a) => El::Q(a.recip()),
            El::P(a, p) => {
                let x = (1..*p)
                    .find(|x| (a * x) % p == 1)
                    .expect("nonzero residue");
                El::P(x, *p)
            }
        }
    }
}

pub type Mat = Vec<Vec<El>>;

pub fn to_mat(m: &SquareMatrix) -> Mat {
    (0..m.n())
        .map(|i| (0..m.n()).map(|j| El::from_scalar(m.get(i, j))).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![a[0][0].zero_like(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = a[0][0].zero_like();
            for k in 0..n {
                acc = acc.add(&a[i][k].mul(&b[k][j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn identity_like(a: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { a[0][0].one_like() } else { a[0][0].zero_like() })
                .collect()
        })
        .collect()
}

/// Rank of a list of row vectors by plain Gaussian elimination.
pub fn rank(rows: &[Vec<El>]) -> usize {
    let mut m: Vec<Vec<El>> = rows.to_vec();
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = m[r][c].inv();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].mul(&inv);
                for j in 0..cols {
                    let d = f.mul(&m[r][j]);
                    m[i][j] = m[i][j].sub(&d);
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

pub fn flatten(m: &Mat) -> Vec<El> {
    m.iter().flatten().cloned().collect()
}

/// Ranks of `L_0, L_1, ...` computed by multiplying out every word of each
/// length, stopping at the first repeated rank.
pub fn naive_ranks(g: &GeneratorSet) -> Vec<usize> {
    let gens: Vec<Mat> = g.mats().iter().map(to_mat).collect();
    let id = identity_like(&gens[0]);
    let mut all = vec![flatten(&id)];
    let mut frontier = vec![id];
    let mut ranks = vec![1];
    loop {
        let mut next = Vec::with_capacity(frontier.len() * gens.len());
        for w in &frontier {
            for x in &gens {
                next.push(mat_mul(w, x));
            }
        }
        all.extend(next.iter().map(flatten));
        let r = rank(&all);
        let done = r == *ranks.last().unwrap();
        ranks.push(r);
        if done {
            return ranks;
        }
        frontier = next;
    }
}

/// Determinant by elimination.
pub fn det(a: &Mat) -> El {
    let n = a.len();
    let mut m = a.clone();
    let mut d = a[0][0].one_like();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return a[0][0].zero_like();
        };
        if piv != c {
            m.swap(piv, c);
            d = d.neg();
        }
        d = d.mul(&m[c][c]);
        let inv = m[c][c].inv();
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = m[i][c].mul(&inv);
                for j in c..n {
                    let s = f.mul(&m[c][j]);
                    m[i][j] = m[i][j].sub(&s);
                }
            }
        }
    }
    d
}

/// Solves `A x = b` for square invertible `A`.
pub fn solve(a: &Mat, b: &[El]) -> Vec<El> {
    let n = a.len();
    let mut m: Vec<Vec<El>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| !m[i][c].is_zero()).expect("invertible");
        m.swap(piv, c);
        let inv = m[c][c].inv();
        for j in c..=n {
            m[c][j] = m[c][j].mul(&inv);
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=n {
                    let s = f.mul(&m[c][j]);
                    m[i][j] = m[i][j].sub(&s);
                }
            }
        }
    }
    m.into_iter().map(|r| r[n].clone()).collect()
}

/// Coefficients of `det(xI - A)`, lowest degree first, from its values at
/// `x = 0..=n`. Needs more than `n` field elements.
pub fn char_poly_by_interpolation(a: &Mat) -> Vec<El> {
    let n = a.len();
    let z = &a[0][0];
    let xs: Vec<El> = (0..=n as i64).map(|x| z.int_like(x)).collect();
    let values: Vec<El> = xs
        .iter()
        .map(|x| {
            let m: Mat = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let diag = if i == j { x.clone() } else { z.zero_like() };
                            diag.sub(&a[i][j])
                        })
                        .collect()
                })
                .collect();
            det(&m)
        })
        .collect();
    let vandermonde: Mat = xs
        .iter()
        .map(|x| {
            let mut row = vec![z.one_like()];
            for _ in 0..n {
                let next = row.last().unwrap().mul(x);
                row.push(next);
            }
            row
        })
        .collect();
    solve(&vandermonde, &values)
}

/// Base-`(t+1)` value folded by hand, as `u128`.
pub fn value_u128(letters: &[usize], t: usize) -> u128 {
    letters
        .iter()
        .fold(0u128, |acc, &l| acc * (t as u128 + 1) + l as u128)
}
