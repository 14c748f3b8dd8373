use std::fmt;

use crate::error::{Error, Result};

use super::field::{FieldSpec, Scalar};

/// Dense square matrix over an exact field, stored row-major.
///
/// Row-major order is also the vectorization used by every span
/// computation: entry `(i, j)` is coordinate `i * n + j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    n: usize,
    field: FieldSpec,
    entries: Vec<Scalar>,
}

impl SquareMatrix {
    pub fn new(field: FieldSpec, n: usize, entries: Vec<Scalar>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionTooSmall(n));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: n * n,
                right: entries.len(),
            });
        }
        if let Some(bad) = entries.iter().find(|s| !field.contains(s)) {
            return Err(Error::FieldMismatch {
                left: field.to_string(),
                right: bad.field().to_string(),
            });
        }
        Ok(SquareMatrix { n, field, entries })
    }

    /// Builds a matrix from integer rows. Panics on ragged input; meant for
    /// fixtures and generated families.
    pub fn from_int_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must be square");
        let entries = rows.iter().flatten().map(|&v| field.from_i64(v)).collect();
        SquareMatrix { n, field, entries }
    }

    pub fn zero(field: FieldSpec, n: usize) -> Self {
        SquareMatrix {
            n,
            field,
            entries: vec![field.zero(); n * n],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zero(field, n);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    /// `E_{ij}` with 0-based indices.
    pub fn unit(field: FieldSpec, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(field, n);
        m.entries[i * n + j] = field.one();
        m
    }

    pub fn diagonal(field: FieldSpec, diag: Vec<Scalar>) -> Self {
        let n = diag.len();
        let mut m = Self::zero(field, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        assert!(self.field.contains(&value), "entry from a foreign field");
        self.entries[i * self.n + j] = value;
    }

    /// Row-major coordinate vector of length `n^2`.
    pub fn as_vector(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    fn check_compatible(&self, other: &SquareMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: other.field.to_string(),
            });
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        self.check_compatible(other)?;
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.field.zero();
                for k in 0..n {
                    let a = &self.entries[i * n + k];
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc.mul_add(a, &other.entries[k * n + j]);
                }
                out.push(acc);
            }
        }
        Ok(SquareMatrix {
            n,
            field: self.field,
            entries: out,
        })
    }

    pub fn add(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &SquareMatrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Self {
        SquareMatrix {
            n: self.n,
            field: self.field,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> SquareMatrix {
        SquareMatrix {
            n: self.n,
            field: self.field,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &SquareMatrix) -> Result<()> {
        self.check_compatible(other)?;
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a = a.mul_add(c, b);
        }
        Ok(())
    }

    pub fn pow(&self, mut e: u32) -> SquareMatrix {
        let mut base = self.clone();
        let mut acc = Self::identity(self.field, self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same shape");
            }
            base = base.mul(&base).expect("same shape");
            e >>= 1;
        }
        acc
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Coefficients `c_0..c_n` of `det(lambda*I - A)`, lowest degree first,
    /// by Berkowitz's division-free recurrence. Valid over every field,
    /// including `F_p` with `p <= n`.
    pub fn char_poly(&self) -> Vec<Scalar> {
        let n = self.n;
        let field = self.field;
        let a = |i: usize, j: usize| &self.entries[i * n + j];
        // Highest degree first while building.
        let mut poly = vec![field.one(), -a(0, 0)];
        for r in 1..n {
            // Toeplitz column: 1, -a_rr, -R C, -R A C, ..., -R A^{r-1} C
            // where A is the leading r x r block, R = a[r][0..r], C = a[0..r][r].
            let mut toeplitz = Vec::with_capacity(r + 2);
            toeplitz.push(field.one());
            toeplitz.push(-a(r, r));
            let mut v: Vec<Scalar> = (0..r).map(|i| a(i, r).clone()).collect();
            for step in 0..r {
                let dot = (0..r).fold(field.zero(), |acc, j| acc.mul_add(a(r, j), &v[j]));
                toeplitz.push(-&dot);
                if step + 1 < r {
                    v = (0..r)
                        .map(|i| (0..r).fold(field.zero(), |acc, j| acc.mul_add(a(i, j), &v[j])))
                        .collect();
                }
            }
            let next: Vec<Scalar> = (0..r + 2)
                .map(|i| {
                    (0..=i.min(r)).fold(field.zero(), |acc, j| {
                        acc.mul_add(&toeplitz[i - j], &poly[j])
                    })
                })
                .collect();
            poly = next;
        }
        poly.reverse();
        poly
    }

    /// Evaluates `sum c_i A^i` by Horner's rule, coefficients lowest first.
    pub fn eval_poly(&self, coeffs: &[Scalar]) -> SquareMatrix {
        let id = Self::identity(self.field, self.n);
        let mut acc = Self::zero(self.field, self.n);
        for c in coeffs.iter().rev() {
            acc = acc.mul(self).expect("same shape");
            acc.add_scaled(c, &id).expect("same shape");
        }
        acc
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
