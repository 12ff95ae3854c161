//! Reference values of `f(A)b` from a dense eigendecomposition.

use crate::dense::{HermitianEigen, SchurEigen};
use crate::error::{Error, Result};
use crate::functions::{FunctionSpec, DEFAULT_CONDITION_LIMIT};
use crate::{c64, CMat, CVec};

/// Largest dimension the general (non-Hermitian) path accepts by default.
pub const DEFAULT_GENERAL_MAX_DIM: usize = 1500;

#[derive(Debug, Clone)]
enum Decomposition {
    Hermitian(HermitianEigen),
    General(SchurEigen),
}

/// Eigendecomposition of a dense matrix, kept for repeated evaluations
/// and eigenvector queries.
#[derive(Debug, Clone)]
pub struct DenseOracle {
    decomposition: Decomposition,
}

impl DenseOracle {
    /// Hermitian matrices use a unitary eigendecomposition. Other matrices
    /// are diagonalized through their Schur form; dimensions above
    /// `max_dim` and eigenbases with condition estimate above
    /// `condition_limit` are rejected.
    pub fn new(a: &CMat, hermitian: bool, max_dim: usize, condition_limit: f64) -> Result<Self> {
        let decomposition = if hermitian {
            Decomposition::Hermitian(HermitianEigen::new(a)?)
        } else {
            if a.nrows() > max_dim {
                return Err(Error::InvalidArgument(format!(
                    "dense oracle limited to dimension {max_dim}, got {}",
                    a.nrows()
                )));
            }
            let eig = SchurEigen::new(a)?;
            let estimate = eig.condition_estimate();
            if !(estimate <= condition_limit) {
                return Err(Error::IllConditionedEigenbasis { estimate, limit: condition_limit });
            }
            Decomposition::General(eig)
        };
        Ok(Self { decomposition })
    }

    pub fn eigenvalues(&self) -> Vec<c64> {
        match &self.decomposition {
            Decomposition::Hermitian(e) => e.values.iter().map(|&v| c64::new(v, 0.0)).collect(),
            Decomposition::General(e) => e.values.clone(),
        }
    }

    /// Smallest real part over the spectrum.
    pub fn min_real_eigenvalue(&self) -> f64 {
        self.eigenvalues().iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
    }

    /// `f(A)b`. The sign function is evaluated directly from its scalar
    /// form.
    pub fn apply(&self, fun: &FunctionSpec, b: &CVec) -> Result<CVec> {
        match &self.decomposition {
            Decomposition::Hermitian(e) => e.apply(b, |lam| fun.scalar(c64::new(lam, 0.0))),
            Decomposition::General(e) => e.apply(b, |lam| fun.scalar(lam)),
        }
    }

    /// Unit eigenvectors of the `k` eigenvalues of smallest modulus, as
    /// columns ordered by increasing modulus.
    pub fn smallest_eigenvectors(&self, k: usize) -> CMat {
        let values = self.eigenvalues();
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].norm().total_cmp(&values[b].norm()));
        let cols: Vec<CVec> = order
            .iter()
            .take(k)
            .map(|&i| match &self.decomposition {
                Decomposition::Hermitian(e) => e.vectors.column(i).clone_owned(),
                Decomposition::General(e) => e.vector(i),
            })
            .collect();
        if cols.is_empty() {
            CMat::zeros(values.len(), 0)
        } else {
            CMat::from_columns(&cols)
        }
    }
}

/// `f(A)b` from a dense eigendecomposition of `A`.
pub fn oracle_funm(a: &CMat, fun: &FunctionSpec, b: &CVec, hermitian: bool) -> Result<CVec> {
    DenseOracle::new(a, hermitian, DEFAULT_GENERAL_MAX_DIM, DEFAULT_CONDITION_LIMIT)?.apply(fun, b)
}
