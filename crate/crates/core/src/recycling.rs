//! Updating the augmentation space from harmonic Ritz vectors, and the
//! principal angle used to judge its quality.

use crate::arnoldi::ArnoldiDecomposition;
use crate::dense::{generalized_eig, hpd_pencil_eig, qr_orthonormalize, svd_values};
use crate::error::{Error, Result};
use crate::rfom::{AugmentedQuantities, DPolicy, RecycleSubspace};
use crate::sparse::LinearOperator;
use crate::{c64, CMat, CVec};

/// Above this condition number of the right-hand pencil matrix the pencil
/// is solved in reciprocal form through a Cholesky factor instead.
pub const PENCIL_CONDITION_LIMIT: f64 = 1e10;

/// Relative residual below which a selected vector counts as linearly
/// dependent on the ones already kept.
const DEPENDENCE_TOL: f64 = 1e-10;

/// A pair `(θ, g)` of the pencil `ḠᴴŴᴴŴḠ g = θ ḠᴴŴᴴV̂ g` together with
/// its residual.
#[derive(Debug, Clone)]
pub struct HarmonicRitzPair {
    pub theta: c64,
    pub g: CVec,
    pub residual: f64,
}

/// The two sides of the harmonic Ritz pencil, `(ḠᴴŴᴴŴḠ, ḠᴴŴᴴV̂)` with
/// `Ŵ = [C, V_{j+1}]` and `Ḡ = blockdiag(D, H̄_j)`.
pub fn harmonic_ritz_pencil(aq: &AugmentedQuantities) -> (CMat, CMat) {
    let w = aq.what_extended();
    let gbar = aq.gbar();
    let wg = &w * &gbar; // = A·V̂
    let lhs = gbar.ad_mul(&(w.ad_mul(&w) * &gbar));
    let rhs = wg.ad_mul(aq.vhat());
    (lhs, rhs)
}

/// All `k + j` harmonic Ritz pairs, sorted by ascending `|θ|`.
pub fn harmonic_ritz_pairs(
    dec: &ArnoldiDecomposition,
    rec: &RecycleSubspace,
) -> Result<Vec<HarmonicRitzPair>> {
    let aq = AugmentedQuantities::new(dec, rec)?;
    let (lhs, rhs) = harmonic_ritz_pencil(&aq);
    let s = svd_values(&rhs)?;
    let (smax, smin) = (s[0], s[s.len() - 1]);
    let (theta, g) = if smin > 0.0 && smax / smin <= PENCIL_CONDITION_LIMIT {
        generalized_eig(&lhs, &rhs)?
    } else {
        let (mu, g) = hpd_pencil_eig(&lhs, &rhs)
            .map_err(|_| Error::SingularPencil { smallest: smin })?;
        let theta = mu.map(|m| {
            if m == c64::new(0.0, 0.0) {
                c64::new(f64::INFINITY, 0.0)
            } else {
                1.0 / m
            }
        });
        (theta, g)
    };
    let (ln, rn) = (lhs.norm(), rhs.norm());
    let mut pairs: Vec<HarmonicRitzPair> = theta
        .iter()
        .zip(g.column_iter())
        .map(|(&t, col)| {
            let g = col.clone_owned();
            let residual = if t.norm().is_finite() {
                (&lhs * &g - &rhs * &g * t).norm() / ((ln + t.norm() * rn) * g.norm())
            } else {
                f64::INFINITY
            };
            HarmonicRitzPair { theta: t, g, residual }
        })
        .collect();
    pairs.sort_by(|a, b| a.theta.norm().total_cmp(&b.theta.norm()));
    Ok(pairs)
}

/// The `k` harmonic Ritz vectors `V̂·g_i` of smallest `|θ_i|`, normalized
/// to unit columns. Vectors numerically dependent on earlier ones are
/// skipped, so the result may hold fewer than `k` columns.
pub fn harmonic_ritz_basis(
    dec: &ArnoldiDecomposition,
    rec: &RecycleSubspace,
    k: usize,
) -> Result<CMat> {
    let n = dec.dim();
    if k == 0 {
        return Ok(CMat::zeros(n, 0));
    }
    if k > rec.k() + dec.steps() {
        return Err(Error::InvalidArgument(format!(
            "cannot extract {k} vectors from a space of dimension {}",
            rec.k() + dec.steps()
        )));
    }
    let pairs = harmonic_ritz_pairs(dec, rec)?;
    let aq = AugmentedQuantities::new(dec, rec)?;
    let mut kept: Vec<CVec> = Vec::with_capacity(k);
    let mut ortho: Vec<CVec> = Vec::with_capacity(k);
    for pair in pairs.iter().filter(|p| p.theta.norm().is_finite()) {
        if kept.len() == k {
            break;
        }
        let y = aq.vhat() * &pair.g;
        let nrm = y.norm();
        if !(nrm > 0.0) {
            continue;
        }
        let y = y / c64::new(nrm, 0.0);
        let mut r = y.clone();
        for q in &ortho {
            let coef = q.dotc(&r);
            r.axpy(-coef, q, c64::new(1.0, 0.0));
        }
        let rn = r.norm();
        if rn < DEPENDENCE_TOL {
            continue;
        }
        ortho.push(r / c64::new(rn, 0.0));
        kept.push(y);
    }
    if kept.is_empty() {
        return Err(Error::RankDeficient("no independent harmonic Ritz vectors".into()));
    }
    Ok(CMat::from_columns(&kept))
}

/// [`harmonic_ritz_basis`] turned into a recycle space for the next
/// problem: `C` is formed by applying `next_op`, the operator of the
/// problem the space will be used for.
pub fn harmonic_ritz_update<Op>(
    dec: &ArnoldiDecomposition,
    rec: &RecycleSubspace,
    next_op: &Op,
    k: usize,
    policy: DPolicy,
) -> Result<RecycleSubspace>
where
    Op: LinearOperator + ?Sized,
{
    if k == 0 {
        return Ok(RecycleSubspace::empty(dec.dim()));
    }
    let u = harmonic_ritz_basis(dec, rec, k)?;
    RecycleSubspace::from_basis(next_op, u, policy)
}

/// Largest principal angle between the column spans of `u` and `z`, in
/// radians.
pub fn subspace_angle(u: &CMat, z: &CMat) -> Result<f64> {
    if u.nrows() != z.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "subspaces of C^{} and C^{}",
            u.nrows(),
            z.nrows()
        )));
    }
    let (qu, _) = qr_orthonormalize(u)?;
    let (qz, _) = qr_orthonormalize(z)?;
    // let `small` be the space of lower dimension
    let (small, large) = if qu.ncols() <= qz.ncols() { (&qu, &qz) } else { (&qz, &qu) };
    let cross = large.ad_mul(small);
    let cos_min = svd_values(&cross)?.last().copied().unwrap_or(0.0).clamp(0.0, 1.0);
    let angle = cos_min.acos();
    if angle > 0.5 {
        return Ok(angle);
    }
    // arccos is inaccurate near zero; use the sine of the residual instead
    let resid = small - large * cross;
    let sin_max = svd_values(&resid)?.first().copied().unwrap_or(0.0).clamp(0.0, 1.0);
    Ok(sin_max.asin())
}
