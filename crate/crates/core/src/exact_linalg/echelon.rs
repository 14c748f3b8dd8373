use crate::error::{Error, Result};
use crate::words::Word;

use super::field::{FieldSpec, Scalar};
use super::matrix::SquareMatrix;

/// Incremental reduced row-echelon basis of a subspace of `k^{n^2}`.
///
/// Rows are kept sorted by pivot column. Each inserted vector that grew the
/// basis is remembered by its tag (in insertion order), and every row
/// carries its expansion over those original vectors, so membership answers
/// come back as coefficients over the tagged products rather than over the
/// internal reduced rows.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: FieldSpec,
    ambient_dim: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    /// `rows[i] = sum_j combos[i][j] * original_j`
    combos: Vec<Vec<Scalar>>,
    tags: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    Grew,
    /// Coefficients over [`EchelonBasis::tags`].
    AlreadyInSpan(Vec<Scalar>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Coefficients over [`EchelonBasis::tags`].
    In(Vec<Scalar>),
    /// The vector reduced against every row; zero at all pivot columns.
    NotIn(Vec<Scalar>),
}

impl Membership {
    pub fn is_in(&self) -> bool {
        matches!(self, Membership::In(_))
    }
}

impl EchelonBasis {
    pub fn new(field: FieldSpec, ambient_dim: usize) -> Self {
        EchelonBasis {
            field,
            ambient_dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
            tags: Vec::new(),
        }
    }

    /// Basis for `n x n` matrices, ambient dimension `n^2`.
    pub fn for_matrices(field: FieldSpec, n: usize) -> Self {
        Self::new(field, n * n)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Tags of the vectors that grew the basis, in insertion order.
    pub fn tags(&self) -> &[Word] {
        &self.tags
    }

    fn check_vector(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                left: self.ambient_dim,
                right: v.len(),
            });
        }
        if let Some(bad) = v.iter().find(|s| !self.field.contains(s)) {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: bad.field().to_string(),
            });
        }
        Ok(())
    }

    fn check_matrix(&self, m: &SquareMatrix) -> Result<()> {
        if m.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: m.field().to_string(),
            });
        }
        self.check_vector(m.as_vector())
    }

    /// Returns `(residual, coefficients)` with
    /// `v = sum coefficients_j * original_j + residual`.
    fn reduce(&self, v: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        let mut residual = v.to_vec();
        let mut coeffs = vec![self.field.zero(); self.tags.len()];
        for ((row, &pivot), combo) in self.rows.iter().zip(&self.pivots).zip(&self.combos) {
            let c = residual[pivot].clone();
            if c.is_zero() {
                continue;
            }
            let minus_c = -&c;
            for (r, x) in residual.iter_mut().zip(row).skip(pivot) {
                if !x.is_zero() {
                    *r = r.mul_add(&minus_c, x);
                }
            }
            for (acc, x) in coeffs.iter_mut().zip(combo) {
                if !x.is_zero() {
                    *acc = acc.mul_add(&c, x);
                }
            }
        }
        (residual, coeffs)
    }

    pub fn membership_vec(&self, v: &[Scalar]) -> Result<Membership> {
        self.check_vector(v)?;
        let (residual, coeffs) = self.reduce(v);
        if residual.iter().all(Scalar::is_zero) {
            Ok(Membership::In(coeffs))
        } else {
            Ok(Membership::NotIn(residual))
        }
    }

    pub fn membership(&self, m: &SquareMatrix) -> Result<Membership> {
        self.check_matrix(m)?;
        self.membership_vec(m.as_vector())
    }

    pub fn insert_vec(&mut self, v: &[Scalar], tag: Word) -> Result<Insertion> {
        self.check_vector(v)?;
        let (residual, coeffs) = self.reduce(v);
        let Some(pivot) = residual.iter().position(|s| !s.is_zero()) else {
            return Ok(Insertion::AlreadyInSpan(coeffs));
        };
        let inv = residual[pivot].inv().expect("nonzero pivot");
        let new_row: Vec<Scalar> = residual.iter().map(|x| x * &inv).collect();
        // residual = v - sum coeffs_j original_j, so the normalized row is
        // inv * (original_new - sum coeffs_j original_j).
        let mut new_combo: Vec<Scalar> = coeffs.iter().map(|c| -&(c * &inv)).collect();
        new_combo.push(inv);

        for combo in &mut self.combos {
            combo.push(self.field.zero());
        }
        for (row, combo) in self.rows.iter_mut().zip(self.combos.iter_mut()) {
            let f = row[pivot].clone();
            if f.is_zero() {
                continue;
            }
            let minus_f = -&f;
            for (r, x) in row.iter_mut().zip(&new_row) {
                if !x.is_zero() {
                    *r = r.mul_add(&minus_f, x);
                }
            }
            for (c, x) in combo.iter_mut().zip(&new_combo) {
                if !x.is_zero() {
                    *c = c.mul_add(&minus_f, x);
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.rows.insert(at, new_row);
        self.pivots.insert(at, pivot);
        self.combos.insert(at, new_combo);
        self.tags.push(tag);
        Ok(Insertion::Grew)
    }

    pub fn insert(&mut self, m: &SquareMatrix, tag: Word) -> Result<Insertion> {
        self.check_matrix(m)?;
        self.insert_vec(m.as_vector(), tag)
    }
}
