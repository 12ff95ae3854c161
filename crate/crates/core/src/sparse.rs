//! Compressed-row sparse matrices and the operator abstraction the Krylov
//! code is written against.

use crate::error::{Error, Result};
use crate::{c64, CMat, CVec};

/// Anything that can be applied to a vector. Krylov methods only ever
/// touch the matrix through this trait.
pub trait LinearOperator {
    fn dim(&self) -> usize;

    fn apply(&self, x: &CVec) -> CVec;

    /// Column-by-column application.
    fn apply_mat(&self, x: &CMat) -> CMat {
        let mut out = CMat::zeros(self.dim(), x.ncols());
        for (j, col) in x.column_iter().enumerate() {
            out.set_column(j, &self.apply(&col.clone_owned()));
        }
        out
    }

    /// Whether the operator maps real vectors to real vectors.
    fn is_real(&self) -> bool {
        false
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, x: &CVec) -> CVec {
        (**self).apply(x)
    }
    fn is_real(&self) -> bool {
        (**self).is_real()
    }
}

impl LinearOperator for CMat {
    fn dim(&self) -> usize {
        self.nrows()
    }
    fn apply(&self, x: &CVec) -> CVec {
        self * x
    }
    fn apply_mat(&self, x: &CMat) -> CMat {
        self * x
    }
    fn is_real(&self) -> bool {
        crate::dense::is_real(self)
    }
}

/// `A²` applied as two products with `A`.
#[derive(Debug, Clone)]
pub struct Squared<T>(pub T);

impl<T: LinearOperator> LinearOperator for Squared<T> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn apply(&self, x: &CVec) -> CVec {
        self.0.apply(&self.0.apply(x))
    }
    fn is_real(&self) -> bool {
        self.0.is_real()
    }
}

/// Operator defined by a closure.
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&CVec) -> CVec> FnOperator<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&CVec) -> CVec> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn apply(&self, x: &CVec) -> CVec {
        (self.f)(x)
    }
}

/// Complex matrix in compressed sparse row form. Column indices are sorted
/// within each row and contain no duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<c64>,
}

impl SparseMatrix {
    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets<I>(nrows: usize, ncols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, c64)>,
    {
        let mut entries: Vec<(usize, usize, c64)> = triplets.into_iter().collect();
        if let Some(&(r, c, _)) = entries.iter().find(|(r, c, _)| *r >= nrows || *c >= ncols) {
            return Err(Error::DimensionMismatch(format!(
                "entry ({r}, {c}) outside {nrows}x{ncols}"
            )));
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values: Vec<c64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            if last == Some((r, c)) {
                *values.last_mut().expect("duplicate follows an entry") += v;
                continue;
            }
            last = Some((r, c));
            row_ptr[r + 1] += 1;
            col_idx.push(c);
            values.push(v);
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self { nrows, ncols, row_ptr, col_idx, values })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, c64::new(1.0, 0.0))))
            .expect("diagonal entries are in range")
    }

    pub fn from_dense(m: &CMat) -> Self {
        let trip = (0..m.nrows()).flat_map(|i| {
            (0..m.ncols()).filter_map(move |j| {
                let v = m[(i, j)];
                (v != c64::new(0.0, 0.0)).then_some((i, j, v))
            })
        });
        Self::from_triplets(m.nrows(), m.ncols(), trip).expect("indices from matrix shape")
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[c64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [c64] {
        &mut self.values
    }

    /// Stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, c64)> + '_ {
        (0..self.nrows).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |p| (r, self.col_idx[p], self.values[p]))
        })
    }

    pub fn get(&self, r: usize, c: usize) -> c64 {
        let row = &self.col_idx[self.row_ptr[r]..self.row_ptr[r + 1]];
        match row.binary_search(&c) {
            Ok(p) => self.values[self.row_ptr[r] + p],
            Err(_) => c64::new(0.0, 0.0),
        }
    }

    /// Position of entry `(r, c)` in the value array, if stored.
    pub fn position(&self, r: usize, c: usize) -> Option<usize> {
        let row = &self.col_idx[self.row_ptr[r]..self.row_ptr[r + 1]];
        row.binary_search(&c).ok().map(|p| self.row_ptr[r] + p)
    }

    pub fn mul_vec(&self, x: &CVec) -> CVec {
        assert_eq!(x.len(), self.ncols, "vector length does not match columns");
        let mut y = CVec::zeros(self.nrows);
        for r in 0..self.nrows {
            let mut acc = c64::new(0.0, 0.0);
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[p] * x[self.col_idx[p]];
            }
            y[r] = acc;
        }
        y
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.ncols, self.nrows, self.triplets().map(|(r, c, v)| (c, r, v.conj())))
            .expect("transposed indices are in range")
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖A − Aᴴ‖_F ≤ rtol·‖A‖_F`.
    pub fn is_hermitian(&self, rtol: f64) -> bool {
        if self.nrows != self.ncols {
            return false;
        }
        let mut off = 0.0;
        for (r, c, v) in self.triplets() {
            off += (v - self.get(c, r).conj()).norm_sqr();
        }
        off.sqrt() <= rtol * self.frobenius_norm().max(f64::MIN_POSITIVE)
    }

    pub fn is_real_valued(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// `A + alpha·B`, with the union of both patterns.
    pub fn add_scaled(&self, alpha: f64, other: &SparseMatrix) -> Result<Self> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::DimensionMismatch("sparse shapes differ".into()));
        }
        let scale = c64::new(alpha, 0.0);
        Self::from_triplets(
            self.nrows,
            self.ncols,
            self.triplets().chain(other.triplets().map(|(r, c, v)| (r, c, v * scale))),
        )
    }

    /// Sparse product `A·B`.
    pub fn matmul(&self, other: &SparseMatrix) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch("inner dimensions differ".into()));
        }
        let mut trip = Vec::new();
        for r in 0..self.nrows {
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                let k = self.col_idx[p];
                let a = self.values[p];
                for q in other.row_ptr[k]..other.row_ptr[k + 1] {
                    trip.push((r, other.col_idx[q], a * other.values[q]));
                }
            }
        }
        Self::from_triplets(self.nrows, other.ncols, trip)
    }
}

impl LinearOperator for SparseMatrix {
    fn dim(&self) -> usize {
        self.nrows
    }
    fn apply(&self, x: &CVec) -> CVec {
        self.mul_vec(x)
    }
    fn is_real(&self) -> bool {
        self.is_real_valued()
    }
}
