//! Arnoldi process with optional reorthogonalization, and the shifted FOM
//! iterates it yields for free.

use nalgebra::DMatrixView;

use crate::dense::Lu;
use crate::error::{Error, Result};
use crate::sparse::LinearOperator;
use crate::{c64, CMat, CVec};

const BREAKDOWN_RTOL: f64 = 1e-12;

/// Orthonormal Krylov basis `V_{j+1}` and Hessenberg matrix `H̄_j` with
/// `A V_j = V_{j+1} H̄_j`.
///
/// After a breakdown at step `ℓ` the decomposition is truncated to `j = ℓ`,
/// the last basis column is zero and `h_{j+1,j} = 0`.
#[derive(Debug, Clone)]
pub struct ArnoldiDecomposition {
    v: CMat,
    hbar: CMat,
    beta: f64,
    breakdown: bool,
}

impl ArnoldiDecomposition {
    /// Number of Arnoldi steps `j` actually taken.
    pub fn steps(&self) -> usize {
        self.hbar.ncols()
    }

    /// Problem dimension `n`.
    pub fn dim(&self) -> usize {
        self.v.nrows()
    }

    /// `‖b‖`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn breakdown(&self) -> bool {
        self.breakdown
    }

    /// `V_j` (n × j).
    pub fn basis(&self) -> DMatrixView<'_, c64> {
        self.v.columns(0, self.steps())
    }

    /// `V_{j+1}` (n × (j+1)).
    pub fn basis_extended(&self) -> &CMat {
        &self.v
    }

    /// `v_{j+1}`.
    pub fn next_vector(&self) -> CVec {
        self.v.column(self.steps()).clone_owned()
    }

    /// `H̄_j` ((j+1) × j).
    pub fn hbar(&self) -> &CMat {
        &self.hbar
    }

    /// `H_j` (j × j), i.e. `H̄_j` without its last row.
    pub fn hessenberg(&self) -> CMat {
        let j = self.steps();
        self.hbar.view((0, 0), (j, j)).clone_owned()
    }

    /// `h_{j+1,j}`.
    pub fn subdiagonal(&self) -> c64 {
        let j = self.steps();
        self.hbar[(j, j - 1)]
    }

    /// `‖b‖ e₁` in `ℂʲ`.
    pub fn rhs_coefficients(&self) -> CVec {
        let mut e = CVec::zeros(self.steps());
        e[0] = c64::new(self.beta, 0.0);
        e
    }
}

/// Runs `j` steps of the Arnoldi process on `(op, b)`.
///
/// Each new vector is orthogonalized by modified Gram–Schmidt; with
/// `reorth` set a second classical Gram–Schmidt pass follows and its
/// coefficients are folded into `H̄`.
pub fn arnoldi<Op>(op: &Op, b: &CVec, j: usize, reorth: bool) -> Result<ArnoldiDecomposition>
where
    Op: LinearOperator + ?Sized,
{
    let n = op.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "rhs length {} vs operator dimension {n}",
            b.len()
        )));
    }
    if j == 0 || j > n {
        return Err(Error::InvalidArgument(format!("need 1 <= j <= {n}, got j = {j}")));
    }
    let beta = b.norm();
    if beta == 0.0 {
        return Err(Error::ZeroRhs);
    }

    let mut v = CMat::zeros(n, j + 1);
    let mut h = CMat::zeros(j + 1, j);
    v.set_column(0, &(b / c64::new(beta, 0.0)));
    let mut hmax: f64 = 0.0;
    let mut steps = j;
    let mut breakdown = false;

    for l in 0..j {
        let mut w = op.apply(&v.column(l).clone_owned());
        for i in 0..=l {
            let hil = v.column(i).dotc(&w);
            w.axpy(-hil, &v.column(i), c64::new(1.0, 0.0));
            h[(i, l)] += hil;
        }
        if reorth {
            let basis = v.columns(0, l + 1);
            let coeffs = basis.ad_mul(&w);
            w -= basis * &coeffs;
            for i in 0..=l {
                h[(i, l)] += coeffs[i];
            }
        }
        let hn = w.norm();
        for i in 0..=l {
            hmax = hmax.max(h[(i, l)].norm());
        }
        hmax = hmax.max(hn);
        if hn < BREAKDOWN_RTOL * hmax {
            steps = l + 1;
            breakdown = true;
            break;
        }
        h[(l + 1, l)] = c64::new(hn, 0.0);
        v.set_column(l + 1, &(w / c64::new(hn, 0.0)));
    }

    let v = v.columns(0, steps + 1).clone_owned();
    let hbar = h.view((0, 0), (steps + 1, steps)).clone_owned();
    Ok(ArnoldiDecomposition { v, hbar, beta, breakdown })
}

/// Coefficients `‖b‖ (σI − H_j)⁻¹ e₁` of the shifted FOM iterate.
pub fn shifted_fom_coefficients(dec: &ArnoldiDecomposition, sigma: c64) -> Result<CVec> {
    let j = dec.steps();
    let shifted = CMat::identity(j, j) * sigma - dec.hessenberg();
    let lu = Lu::new(&shifted).map_err(|_| Error::SingularShift { shift: sigma.to_string() })?;
    Ok(lu.solve_vec(&dec.rhs_coefficients()))
}

/// FOM approximation `x_j(σ) = ‖b‖ V_j (σI − H_j)⁻¹ e₁` to `(σI − A)⁻¹ b`.
pub fn shifted_fom_solve(dec: &ArnoldiDecomposition, sigma: c64) -> Result<CVec> {
    let y = shifted_fom_coefficients(dec, sigma)?;
    Ok(dec.basis() * y)
}
