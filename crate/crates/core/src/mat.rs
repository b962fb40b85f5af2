//! Dense matrices over F_{q^2}, with row reduction and the machinery for
//! finding kernel vectors whose coordinates are all nonzero elements of F_q.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf::{FieldContext, FieldElement};

/// Exhaustive search in [`find_all_nonzero`] is used up to this many
/// coefficient tuples.
pub const EXHAUSTIVE_SEARCH_LIMIT: u64 = 1_000_000;
/// Random attempts made by [`find_all_nonzero`] beyond the exhaustive limit.
pub const RANDOM_SEARCH_ATTEMPTS: u64 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatError {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("entry count {got} does not match {rows}x{cols}")]
    BadEntryCount { rows: usize, cols: usize, got: usize },
    #[error("bad shape {rows}x{cols}: {reason}")]
    BadShape {
        rows: usize,
        cols: usize,
        reason: &'static str,
    },
    #[error("kernel basis is empty")]
    EmptyBasis,
    #[error("no all-nonzero vector found after {attempts} attempts")]
    NotFound { attempts: u64 },
}

#[derive(Clone)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
    ctx: Arc<FieldContext>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn new(
        ctx: Arc<FieldContext>,
        rows: usize,
        cols: usize,
        entries: Vec<FieldElement>,
    ) -> Result<Self, MatError> {
        if entries.len() != rows * cols {
            return Err(MatError::BadEntryCount {
                rows,
                cols,
                got: entries.len(),
            });
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
            ctx,
        })
    }

    /// Builds a matrix from rows of equal length; `cols` covers the
    /// zero-row case.
    pub fn from_rows(
        ctx: Arc<FieldContext>,
        cols: usize,
        rows: Vec<Vec<FieldElement>>,
    ) -> Result<Self, MatError> {
        let n_rows = rows.len();
        let mut entries = Vec::with_capacity(n_rows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(MatError::BadEntryCount {
                    rows: n_rows,
                    cols,
                    got: row.len(),
                });
            }
            entries.extend(row);
        }
        Matrix::new(ctx, n_rows, cols, entries)
    }

    /// Matrix with small integer entries mapped into the prime field.
    pub fn from_ints(ctx: Arc<FieldContext>, rows: &[&[i64]]) -> Result<Self, MatError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let converted = rows
            .iter()
            .map(|r| r.iter().map(|&x| ctx.from_int(x)).collect())
            .collect();
        Matrix::from_rows(ctx, cols, converted)
    }

    pub fn zeros(ctx: Arc<FieldContext>, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![FieldElement::Zero; rows * cols],
            ctx,
        }
    }

    pub fn identity(ctx: Arc<FieldContext>, size: usize) -> Self {
        let mut m = Matrix::zeros(ctx, size, size);
        for i in 0..size {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: FieldElement) {
        self.entries[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    /// Entry grid in wire form, for failure reports.
    pub fn to_grid(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.ctx.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, MatError> {
        if self.cols != other.rows {
            return Err(MatError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let ctx = &self.ctx;
        let mut out = Matrix::zeros(ctx.clone(), self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let dot = ctx.sum((0..self.cols).map(|i| ctx.mul(self.get(r, i), other.get(i, c))));
                out.set(r, c, dot);
            }
        }
        Ok(out)
    }

    /// A·uᵀ.
    pub fn apply(&self, u: &[FieldElement]) -> Result<Vec<FieldElement>, MatError> {
        if u.len() != self.cols {
            return Err(MatError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (u.len(), 1),
            });
        }
        let ctx = &self.ctx;
        Ok((0..self.rows)
            .map(|r| ctx.sum(self.row(r).iter().zip(u).map(|(&a, &b)| ctx.mul(a, b))))
            .collect())
    }

    /// Entrywise Frobenius, A^{(q)}.
    pub fn conjugate(&self) -> Matrix {
        Matrix {
            entries: self.entries.iter().map(|&x| self.ctx.frobenius(x)).collect(),
            ..self.clone()
        }
    }

    pub fn delete_column(&self, col: usize) -> Matrix {
        let entries = (0..self.rows)
            .flat_map(|r| {
                self.row(r)
                    .iter()
                    .enumerate()
                    .filter(move |&(c, _)| c != col)
                    .map(|(_, &x)| x)
            })
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols - 1,
            entries,
            ctx: self.ctx.clone(),
        }
    }

    /// Stacks `other` below `self`.
    pub fn stack(&self, other: &Matrix) -> Result<Matrix, MatError> {
        if self.cols != other.cols {
            return Err(MatError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Matrix::new(self.ctx.clone(), self.rows + other.rows, self.cols, entries)
    }

    /// Reduced row echelon form and rank.
    pub fn rref(&self) -> (Matrix, usize) {
        let (m, pivots) = self.rref_with_pivots();
        (m, pivots.len())
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let ctx = self.ctx.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(pivot_row) = (lead..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(lead, pivot_row);
            let inv = ctx.inv(m.get(lead, col)).expect("pivot is nonzero");
            for c in col..m.cols {
                let x = ctx.mul(m.get(lead, c), inv);
                m.set(lead, c, x);
            }
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let factor = m.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let x = ctx.sub(m.get(r, c), ctx.mul(factor, m.get(lead, c)));
                    m.set(r, c, x);
                }
            }
            pivots.push(col);
            lead += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.entries.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    /// Basis of {u : A·uᵀ = 0}, one vector per free column with a 1 in
    /// that column and 0 in the other free columns.
    pub fn nullspace_basis(&self) -> Vec<Vec<FieldElement>> {
        let ctx = &self.ctx;
        let (r, pivots) = self.rref_with_pivots();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![FieldElement::Zero; self.cols];
                v[f] = FieldElement::ONE;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = ctx.neg(r.get(row, f));
                }
                v
            })
            .collect()
    }

    /// True iff both matrices have the same row space.
    pub fn row_equivalent(&self, other: &Matrix) -> Result<bool, MatError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(MatError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(self.rref().0 == other.rref().0)
    }

    /// Rank is unchanged by deleting any single column. This is the
    /// hypothesis under which A·uᵀ = 0 has a solution in (F_q^*)^n.
    pub fn rank_survives_column_deletion(&self) -> Result<bool, MatError> {
        if self.rows == 0 || self.rows >= self.cols {
            return Err(MatError::BadShape {
                rows: self.rows,
                cols: self.cols,
                reason: "need 1 ≤ rows < cols",
            });
        }
        let rank = self.rank();
        Ok((0..self.cols).all(|c| self.delete_column(c).rank() == rank))
    }

    /// Basis of the F_q-rational kernel {u ∈ F_q^n : A·uᵀ = 0}.
    ///
    /// Each entry is split as a0 + a1·θ with a0, a1 ∈ F_q and the stacked
    /// system [A0; A1]·uᵀ = 0 is solved; row reduction of an F_q matrix
    /// stays inside F_q, so the basis is F_q-valued.
    pub fn base_field_solutions(&self) -> Vec<Vec<FieldElement>> {
        let ctx = &self.ctx;
        let theta = ctx.theta_pow(1);
        let denom = ctx
            .inv(ctx.sub(theta, ctx.frobenius(theta)))
            .expect("θ is not in F_q");
        let mut real = Vec::with_capacity(self.entries.len());
        let mut imag = Vec::with_capacity(self.entries.len());
        for &x in &self.entries {
            let b = ctx.mul(ctx.sub(x, ctx.frobenius(x)), denom);
            let a = ctx.sub(x, ctx.mul(b, theta));
            real.push(a);
            imag.push(b);
        }
        let a0 = Matrix::new(ctx.clone(), self.rows, self.cols, real).expect("same shape");
        let a1 = Matrix::new(ctx.clone(), self.rows, self.cols, imag).expect("same shape");
        a0.stack(&a1).expect("same width").nullspace_basis()
    }
}

/// A kernel vector with every coordinate in F_q^*.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionVector(Vec<FieldElement>);

impl SolutionVector {
    /// Checks that every coordinate is a nonzero element of F_q.
    pub fn new(ctx: &FieldContext, coords: Vec<FieldElement>) -> Option<Self> {
        coords
            .iter()
            .all(|&x| !x.is_zero() && ctx.in_base_field(x))
            .then_some(SolutionVector(coords))
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<FieldElement> {
        self.0
    }
}

/// Combination of `basis` rows with `coeffs`, abandoned at the first
/// coordinate outside F_q^*.
fn combine_all_nonzero(
    ctx: &FieldContext,
    basis: &[Vec<FieldElement>],
    coeffs: &[FieldElement],
) -> Option<SolutionVector> {
    let width = basis[0].len();
    let mut out = Vec::with_capacity(width);
    for i in 0..width {
        let x = ctx.sum(basis.iter().zip(coeffs).map(|(b, &c)| ctx.mul(b[i], c)));
        if x.is_zero() || !ctx.in_base_field(x) {
            return None;
        }
        out.push(x);
    }
    Some(SolutionVector(out))
}

/// Finds a vector in the F_q-span of `basis` with no zero coordinate.
///
/// Nonzero coefficient tuples are enumerated in a fixed order when there
/// are at most [`EXHAUSTIVE_SEARCH_LIMIT`] of them; otherwise
/// [`RANDOM_SEARCH_ATTEMPTS`] tuples are drawn from a ChaCha stream seeded
/// with `seed`. With a free-column basis from
/// [`Matrix::nullspace_basis`] every all-nonzero vector has all-nonzero
/// coefficients, so the exhaustive branch is complete.
pub fn find_all_nonzero(
    ctx: &FieldContext,
    basis: &[Vec<FieldElement>],
    seed: u64,
) -> Result<SolutionVector, MatError> {
    find_all_nonzero_with(ctx, basis, seed, RANDOM_SEARCH_ATTEMPTS)
}

/// [`find_all_nonzero`] with a caller-chosen number of random draws.
pub fn find_all_nonzero_with(
    ctx: &FieldContext,
    basis: &[Vec<FieldElement>],
    seed: u64,
    attempts: u64,
) -> Result<SolutionVector, MatError> {
    if basis.is_empty() {
        return Err(MatError::EmptyBasis);
    }
    let units: Vec<FieldElement> = ctx.base_field_units().collect();
    let dim = basis.len() as u32;
    let total = (units.len() as u64)
        .checked_pow(dim)
        .filter(|&t| t <= EXHAUSTIVE_SEARCH_LIMIT);

    if let Some(total) = total {
        let mut idx = vec![0usize; basis.len()];
        for _ in 0..total {
            let coeffs: Vec<FieldElement> = idx.iter().map(|&i| units[i]).collect();
            if let Some(sol) = combine_all_nonzero(ctx, basis, &coeffs) {
                return Ok(sol);
            }
            // Odometer with the last coordinate fastest.
            for digit in idx.iter_mut().rev() {
                *digit += 1;
                if *digit < units.len() {
                    break;
                }
                *digit = 0;
            }
        }
        return Err(MatError::NotFound { attempts: total });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![FieldElement::Zero; basis.len()];
    for _ in 0..attempts {
        for c in coeffs.iter_mut() {
            *c = units[rng.gen_range(0..units.len())];
        }
        if let Some(sol) = combine_all_nonzero(ctx, basis, &coeffs) {
            return Ok(sol);
        }
    }
    Err(MatError::NotFound { attempts })
}
