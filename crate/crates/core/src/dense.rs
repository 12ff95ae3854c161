//! Complex dense linear algebra used by every other module.
//!
//! Factorizations are backed by `nalgebra`; this module adds the pivot and
//! rank checks, ordering conventions and eigenvector recovery the solvers
//! rely on.

use nalgebra::linalg::{Schur, SymmetricEigen, LU, SVD};
use nalgebra::{DMatrix, Dyn};

use crate::error::{Error, Result};
use crate::{c64, CMat, CVec};

const PIVOT_RTOL: f64 = 1e-14;
const QR_RTOL: f64 = 1e-12;
const HERMITIAN_RTOL: f64 = 1e-10;
const PENCIL_RTOL: f64 = 1e-12;

/// Largest entry magnitude.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `‖M − Mᴴ‖_F ≤ rtol·‖M‖_F`.
pub fn is_hermitian(m: &CMat, rtol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let scale = m.norm();
    let mut off = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            off += (m[(i, j)] - m[(j, i)].conj()).norm_sqr();
        }
    }
    off.sqrt() <= rtol * scale.max(f64::MIN_POSITIVE)
}

/// True if every entry has a zero imaginary part.
pub fn is_real(m: &CMat) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

fn check_square(m: &CMat, what: &str) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "{what} requires a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )))
    }
}

/// LU factorization with partial pivoting, reusable across right-hand sides.
#[derive(Debug, Clone)]
pub struct Lu {
    inner: LU<c64, Dyn, Dyn>,
    dim: usize,
}

impl Lu {
    /// Factors `m`, rejecting it when a pivot falls below `1e-14·max|m_ij|`.
    pub fn new(m: &CMat) -> Result<Self> {
        check_square(m, "LU")?;
        let dim = m.nrows();
        let scale = max_abs(m);
        let threshold = PIVOT_RTOL * scale;
        if dim > 0 && scale == 0.0 {
            return Err(Error::SingularMatrix { pivot: 0.0, threshold });
        }
        let inner = m.clone().lu();
        let pivot = inner
            .u()
            .diagonal()
            .iter()
            .fold(f64::INFINITY, |acc, z| acc.min(z.norm()));
        if dim > 0 && pivot < threshold {
            return Err(Error::SingularMatrix { pivot, threshold });
        }
        Ok(Self { inner, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn solve_vec(&self, b: &CVec) -> CVec {
        assert_eq!(b.len(), self.dim, "rhs length does not match factor");
        if self.dim == 0 {
            return CVec::zeros(0);
        }
        self.inner.solve(b).expect("factor checked nonsingular")
    }

    pub fn solve_mat(&self, b: &CMat) -> CMat {
        assert_eq!(b.nrows(), self.dim, "rhs rows do not match factor");
        if self.dim == 0 {
            return CMat::zeros(0, b.ncols());
        }
        self.inner.solve(b).expect("factor checked nonsingular")
    }

    pub fn inverse(&self) -> CMat {
        self.solve_mat(&CMat::identity(self.dim, self.dim))
    }
}

/// Solves `M X = B` by LU with partial pivoting.
pub fn lu_solve(m: &CMat, b: &CMat) -> Result<CMat> {
    if b.nrows() != m.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "rhs has {} rows, matrix has {}",
            b.nrows(),
            m.nrows()
        )));
    }
    Ok(Lu::new(m)?.solve_mat(b))
}

/// Vector form of [`lu_solve`].
pub fn lu_solve_vec(m: &CMat, b: &CVec) -> Result<CVec> {
    if b.len() != m.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "rhs has length {}, matrix has {} rows",
            b.len(),
            m.nrows()
        )));
    }
    Ok(Lu::new(m)?.solve_vec(b))
}

/// Thin Householder QR: `M = Q R` with orthonormal `Q` (rows × cols).
pub fn qr_orthonormalize(m: &CMat) -> Result<(CMat, CMat)> {
    if m.ncols() > m.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "QR needs cols <= rows, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let scale = m.norm();
    let qr = m.clone().qr();
    let r = qr.r();
    for i in 0..r.nrows() {
        let d = r[(i, i)].norm();
        if d < QR_RTOL * scale || scale == 0.0 {
            return Err(Error::RankDeficient(format!(
                "|R[{i},{i}]| = {d:.3e} relative to norm {scale:.3e}"
            )));
        }
    }
    Ok((qr.q(), r))
}

/// Singular values in descending order.
pub fn svd_values(m: &CMat) -> Result<Vec<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    let svd = SVD::try_new(m.clone(), false, false, f64::EPSILON, 0)
        .ok_or(Error::NoConvergence("singular value decomposition"))?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Eigendecomposition of a Hermitian matrix: real ascending values, unitary vectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermitianEigen {
    pub fn new(m: &CMat) -> Result<Self> {
        check_square(m, "Hermitian eigensolver")?;
        if !is_hermitian(m, HERMITIAN_RTOL) {
            return Err(Error::InvalidArgument(
                "matrix is not Hermitian to 1e-10 relative".into(),
            ));
        }
        let n = m.nrows();
        let cap = 200 * n.max(10);
        let (values, vectors) = if is_real(m) {
            // Real symmetric input: the real solver is several times faster.
            let re = DMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)].re + m[(j, i)].re));
            let eig = SymmetricEigen::try_new(re, f64::EPSILON, cap)
                .ok_or(Error::NoConvergence("real symmetric eigensolver"))?;
            (
                eig.eigenvalues.iter().copied().collect::<Vec<_>>(),
                eig.eigenvectors.map(|x| c64::new(x, 0.0)),
            )
        } else {
            let sym = CMat::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
            let eig = SymmetricEigen::try_new(sym, f64::EPSILON, cap)
                .ok_or(Error::NoConvergence("Hermitian eigensolver"))?;
            (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        Ok(Self {
            values: order.iter().map(|&i| values[i]).collect(),
            vectors: CMat::from_fn(n, n, |i, j| vectors[(i, order[j])]),
        })
    }

    /// `Q f(Λ) Qᴴ b` for a scalar map defined on every eigenvalue.
    pub fn apply<F>(&self, b: &CVec, mut f: F) -> Result<CVec>
    where
        F: FnMut(f64) -> Result<c64>,
    {
        let mut w = self.vectors.ad_mul(b);
        for (wi, &lam) in w.iter_mut().zip(&self.values) {
            *wi *= f(lam)?;
        }
        Ok(&self.vectors * w)
    }
}

/// General eigendecomposition kept in Schur form `M = Q T Qᴴ`, with the
/// eigenvectors of the triangular factor stored as the columns of `y`.
/// Eigenvectors of `M` are `Q·y`.
#[derive(Debug, Clone)]
pub struct SchurEigen {
    pub values: Vec<c64>,
    pub q: CMat,
    pub t: CMat,
    pub y: CMat,
}

impl SchurEigen {
    pub fn new(m: &CMat) -> Result<Self> {
        check_square(m, "eigensolver")?;
        let n = m.nrows();
        if n == 0 {
            return Ok(Self {
                values: Vec::new(),
                q: CMat::zeros(0, 0),
                t: CMat::zeros(0, 0),
                y: CMat::zeros(0, 0),
            });
        }
        let (q, mut t) = if is_real(m) {
            real_schur_as_complex(m)?
        } else {
            Schur::try_new(m.clone(), f64::EPSILON, 200 * n.max(10))
                .ok_or(Error::NoConvergence("complex Schur iteration"))?
                .unpack()
        };
        // The complex Schur factor is upper triangular; clear roundoff below.
        for j in 0..n {
            for i in (j + 1)..n {
                t[(i, j)] = c64::new(0.0, 0.0);
            }
        }
        let values = (0..n).map(|i| t[(i, i)]).collect();
        let y = triangular_eigenvectors(&t);
        Ok(Self { values, q, t, y })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Unit-norm eigenvector `i` of the original matrix.
    pub fn vector(&self, i: usize) -> CVec {
        let n = self.dim();
        // y is upper triangular: only the leading i+1 entries are nonzero.
        let yi = self.y.view((0, i), (i + 1, 1));
        let v = self.q.view((0, 0), (n, i + 1)) * yi;
        let nrm = v.norm();
        CVec::from_iterator(n, v.iter().map(|z| z / nrm))
    }

    pub fn vectors(&self) -> CMat {
        let mut v = &self.q * &self.y;
        for mut col in v.column_iter_mut() {
            let nrm = col.norm();
            col /= c64::new(nrm, 0.0);
        }
        v
    }

    /// 1-norm condition estimate of the triangular eigenvector matrix, which
    /// equals the eigenbasis condition up to the unitary factor.
    pub fn condition_estimate(&self) -> f64 {
        let y = &self.y;
        let ynorm = norm1(y);
        let inv = estimate_inverse_norm1(
            self.dim(),
            |x| y.solve_upper_triangular(x).unwrap_or_else(|| x.map(|_| c64::new(f64::INFINITY, 0.0))),
            |x| y.ad_solve_upper_triangular(x).unwrap_or_else(|| x.map(|_| c64::new(f64::INFINITY, 0.0))),
        );
        ynorm * inv
    }

    /// `V f(Λ) V⁻¹ b` with `V = Q·Y`, evaluated in O(n²).
    pub fn apply<F>(&self, b: &CVec, mut f: F) -> Result<CVec>
    where
        F: FnMut(c64) -> Result<c64>,
    {
        let qb = self.q.ad_mul(b);
        let mut w = self
            .y
            .solve_upper_triangular(&qb)
            .ok_or(Error::SingularMatrix { pivot: 0.0, threshold: 0.0 })?;
        for (wi, &lam) in w.iter_mut().zip(&self.values) {
            *wi *= f(lam)?;
        }
        let yw = &self.y * w;
        Ok(&self.q * yw)
    }
}

/// Eigenvectors of an upper triangular matrix (unit diagonal entry at
/// position `i` of column `i`), by back substitution with LAPACK-style
/// perturbation of tiny denominators.
/// Complex Schur form of a real matrix from its real Schur form, which is
/// several times cheaper to compute. Each 2×2 diagonal block is split by a
/// unitary rotation built from one of its eigenvalues.
fn real_schur_as_complex(m: &CMat) -> Result<(CMat, CMat)> {
    let n = m.nrows();
    let (q, t) = Schur::try_new(m.map(|z| z.re), f64::EPSILON, 200 * n.max(10))
        .ok_or(Error::NoConvergence("real Schur iteration"))?
        .unpack();
    let mut u = q.map(|x| c64::new(x, 0.0));
    let mut t = t.map(|x| c64::new(x, 0.0));
    for k in (1..n).rev() {
        let sub = t[(k, k - 1)];
        if sub.re == 0.0 {
            continue;
        }
        let (a, b, d) = (t[(k - 1, k - 1)], t[(k - 1, k)], t[(k, k)]);
        let half = (a - d) * 0.5;
        let lambda = (a + d) * 0.5 + (half * half + b * sub).sqrt();
        let mu = lambda - d;
        let r = (mu.norm_sqr() + sub.norm_sqr()).sqrt();
        // G = [conj(cs) sn; -sn cs] with sn real
        let (cs, sn) = (mu / r, sub / r);
        for col in (k - 1)..n {
            let (x, y) = (t[(k - 1, col)], t[(k, col)]);
            t[(k - 1, col)] = cs.conj() * x + sn * y;
            t[(k, col)] = cs * y - sn * x;
        }
        for row in 0..=k {
            let (x, y) = (t[(row, k - 1)], t[(row, k)]);
            t[(row, k - 1)] = x * cs + y * sn;
            t[(row, k)] = y * cs.conj() - x * sn;
        }
        for row in 0..n {
            let (x, y) = (u[(row, k - 1)], u[(row, k)]);
            u[(row, k - 1)] = x * cs + y * sn;
            u[(row, k)] = y * cs.conj() - x * sn;
        }
        t[(k, k - 1)] = c64::new(0.0, 0.0);
    }
    Ok((u, t))
}

fn triangular_eigenvectors(t: &CMat) -> CMat {
    let n = t.nrows();
    let smin = (f64::EPSILON * max_abs(t)).max(f64::MIN_POSITIVE);
    let mut y = CMat::zeros(n, n);
    let mut x = vec![c64::new(0.0, 0.0); n];
    for i in 0..n {
        let lam = t[(i, i)];
        for r in 0..i {
            x[r] = -t[(r, i)];
        }
        y[(i, i)] = c64::new(1.0, 0.0);
        for c in (0..i).rev() {
            let mut d = t[(c, c)] - lam;
            if d.norm() < smin {
                d = c64::new(smin, 0.0);
            }
            let yc = x[c] / d;
            y[(c, i)] = yc;
            if yc != c64::new(0.0, 0.0) {
                let col = t.column(c);
                for r in 0..c {
                    x[r] -= yc * col[r];
                }
            }
        }
        let nrm = y.column(i).norm();
        if nrm > 0.0 && nrm.is_finite() {
            let mut col = y.column_mut(i);
            col /= c64::new(nrm, 0.0);
        }
    }
    y
}

fn norm1(m: &CMat) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Hager–Higham estimate of `‖M⁻¹‖₁` from solves with `M` and `Mᴴ`.
pub fn estimate_inverse_norm1<S, T>(n: usize, solve: S, solve_adjoint: T) -> f64
where
    S: Fn(&CVec) -> CVec,
    T: Fn(&CVec) -> CVec,
{
    if n == 0 {
        return 0.0;
    }
    let mut x = CVec::from_element(n, c64::new(1.0 / n as f64, 0.0));
    let mut est = 0.0;
    let mut last_j = usize::MAX;
    for iter in 0..5 {
        let y = solve(&x);
        let new_est: f64 = y.iter().map(|z| z.norm()).sum();
        if !new_est.is_finite() {
            return f64::INFINITY;
        }
        if iter > 0 && new_est <= est {
            break;
        }
        est = new_est;
        let xi = y.map(|z| {
            let a = z.norm();
            if a == 0.0 {
                c64::new(1.0, 0.0)
            } else {
                z / a
            }
        });
        let z = solve_adjoint(&xi);
        let (j, zmax) = z
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.norm()))
            .fold((0, 0.0), |acc, v| if v.1 > acc.1 { v } else { acc });
        let ztx = z.dotc(&x).re;
        if iter > 0 && (zmax <= ztx || j == last_j) {
            break;
        }
        last_j = j;
        x = CVec::zeros(n);
        x[j] = c64::new(1.0, 0.0);
    }
    est
}

/// Eigenpairs of a square matrix. With `hermitian` set the values are real
/// and ascending and the vectors unitary; otherwise vectors have unit norm.
pub fn eig_dense(m: &CMat, hermitian: bool) -> Result<(CVec, CMat)> {
    if hermitian {
        let e = HermitianEigen::new(m)?;
        Ok((
            CVec::from_iterator(e.values.len(), e.values.iter().map(|&v| c64::new(v, 0.0))),
            e.vectors,
        ))
    } else {
        let e = SchurEigen::new(m)?;
        Ok((CVec::from_vec(e.values.clone()), e.vectors()))
    }
}

/// Solves `A g = θ B g` by reduction to `B⁻¹A`.
pub fn generalized_eig(a: &CMat, b: &CMat) -> Result<(CVec, CMat)> {
    check_square(a, "generalized eigensolver")?;
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch("pencil matrices differ in shape".into()));
    }
    let s = svd_values(b)?;
    if let (Some(&smax), Some(&smin)) = (s.first(), s.last()) {
        if smin < PENCIL_RTOL * smax || smax == 0.0 {
            return Err(Error::SingularPencil { smallest: smin });
        }
    }
    let reduced = Lu::new(b)
        .map_err(|_| Error::SingularPencil { smallest: s.last().copied().unwrap_or(0.0) })?
        .solve_mat(a);
    eig_dense(&reduced, false)
}

/// Solves `B g = μ A g` for Hermitian positive definite `A` through a
/// Cholesky factor of `A`. Returns `(μ, g)`; `μ = 0` means an infinite
/// eigenvalue of the reversed pencil `A g = θ B g`.
pub fn hpd_pencil_eig(a_hpd: &CMat, b: &CMat) -> Result<(CVec, CMat)> {
    check_square(a_hpd, "pencil")?;
    let n = a_hpd.nrows();
    let sym = CMat::from_fn(n, n, |i, j| 0.5 * (a_hpd[(i, j)] + a_hpd[(j, i)].conj()));
    let chol = sym
        .cholesky()
        .ok_or_else(|| Error::RankDeficient("pencil matrix is not positive definite".into()))?;
    let l = chol.l();
    let lb = l
        .solve_lower_triangular(b)
        .ok_or(Error::SingularPencil { smallest: 0.0 })?;
    // (L⁻¹ B L⁻ᴴ) = (L⁻¹ (L⁻¹ Bᴴ)ᴴ)
    let lbh = l
        .solve_lower_triangular(&lb.adjoint())
        .ok_or(Error::SingularPencil { smallest: 0.0 })?;
    let reduced = lbh.adjoint();
    let (mu, h) = eig_dense(&reduced, false)?;
    let g = l
        .ad_solve_lower_triangular(&h)
        .ok_or(Error::SingularPencil { smallest: 0.0 })?;
    Ok((mu, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::{random_matrix, random_hermitian};

    fn c(re: f64) -> c64 {
        c64::new(re, 0.0)
    }

    #[test]
    fn lu_identity_and_diagonal() {
        let b = random_matrix(3, 2, 1);
        let x = lu_solve(&CMat::identity(3, 3), &b).unwrap();
        assert!((x - &b).norm() == 0.0);

        let m = CMat::from_diagonal(&CVec::from_vec(vec![c(2.0), c(4.0)]));
        let x = lu_solve_vec(&m, &CVec::from_element(2, c(1.0))).unwrap();
        assert!((x[0] - c(0.5)).norm() < 1e-15);
        assert!((x[1] - c(0.25)).norm() < 1e-15);
    }

    #[test]
    fn lu_random_residual() {
        let m = random_matrix(8, 8, 7) + CMat::identity(8, 8) * c(4.0);
        let b = random_matrix(8, 1, 8);
        let x = lu_solve(&m, &b).unwrap();
        assert!((&m * &x - &b).norm() / b.norm() <= 1e-12);
    }

    #[test]
    fn lu_rejects_singular() {
        let mut m = CMat::identity(3, 3);
        m[(2, 2)] = c(0.0);
        assert!(matches!(Lu::new(&m), Err(Error::SingularMatrix { .. })));
        assert!(matches!(Lu::new(&CMat::zeros(2, 2)), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn qr_examples() {
        let (q, r) = qr_orthonormalize(&CMat::identity(4, 2)).unwrap();
        for i in 0..2 {
            assert!((r[(i, i)].norm() - 1.0).abs() < 1e-14);
            assert!((q[(i, i)].norm() - 1.0).abs() < 1e-14);
        }
        // [e1, e1+e2] spans {e1, e2}
        let mut m = CMat::zeros(3, 2);
        m[(0, 0)] = c(1.0);
        m[(0, 1)] = c(1.0);
        m[(1, 1)] = c(1.0);
        let (q, _) = qr_orthonormalize(&m).unwrap();
        assert!(q.row(2).norm() < 1e-14);

        let m = random_matrix(20, 5, 3);
        let (q, r) = qr_orthonormalize(&m).unwrap();
        assert!((q.ad_mul(&q) - CMat::identity(5, 5)).norm() <= 1e-12);
        assert!((&q * &r - &m).norm() <= 1e-12 * m.norm());
    }

    #[test]
    fn qr_rank_deficient() {
        let mut m = random_matrix(6, 3, 4);
        let c0 = m.column(0).clone_owned();
        m.set_column(2, &(c0 * c(2.0)));
        assert!(matches!(qr_orthonormalize(&m), Err(Error::RankDeficient(_))));
    }

    #[test]
    fn hermitian_eig_examples() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![c(3.0), c(1.0), c(2.0)]));
        let (vals, _) = eig_dense(&m, true).unwrap();
        assert_eq!(vals.iter().map(|v| v.re).collect::<Vec<_>>(), vec![1.0, 2.0, 3.0]);

        let m = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let (vals, _) = eig_dense(&m, true).unwrap();
        assert!((vals[0].re + 1.0).abs() < 1e-14 && (vals[1].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hermitian_eig_random_trace_and_unitarity() {
        let m = random_hermitian(50, 11);
        let e = HermitianEigen::new(&m).unwrap();
        let trace: f64 = (0..50).map(|i| m[(i, i)].re).sum();
        let sum: f64 = e.values.iter().sum();
        assert!((trace - sum).abs() <= 1e-10 * trace.abs().max(1.0));
        assert!((e.vectors.ad_mul(&e.vectors) - CMat::identity(50, 50)).norm() <= 1e-10);
        let lam = CMat::from_diagonal(&CVec::from_iterator(50, e.values.iter().map(|&v| c(v))));
        let resid = &m * &e.vectors - &e.vectors * lam;
        assert!(resid.norm() <= 1e-10 * m.norm());
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn general_eig_residual() {
        let m = random_matrix(30, 30, 5);
        let (vals, vecs) = eig_dense(&m, false).unwrap();
        for i in 0..30 {
            let v = vecs.column(i);
            let r = &m * v - v * vals[i];
            assert!(r.norm() <= 1e-10 * m.norm(), "column {i}: {}", r.norm());
        }
    }

    #[test]
    fn real_input_schur() {
        // rotation blocks give complex pairs, the rest real eigenvalues
        let mut m = random_matrix(30, 30, 77).map(|z| c(z.re));
        m[(0, 1)] = c(5.0);
        m[(1, 0)] = c(-5.0);
        let e = SchurEigen::new(&m).unwrap();
        assert!(e.values.iter().any(|v| v.im.abs() > 1e-3));
        assert!((&e.q * &e.t * e.q.adjoint() - &m).norm() < 1e-12 * m.norm());
        assert!((e.q.adjoint() * &e.q - CMat::identity(30, 30)).norm() < 1e-12);
        for j in 0..30 {
            for i in (j + 1)..30 {
                assert_eq!(e.t[(i, j)], c(0.0));
            }
        }
        let v = e.vectors();
        let lam = CMat::from_diagonal(&CVec::from_vec(e.values.clone()));
        assert!((&m * &v - &v * lam).norm() < 1e-10 * m.norm());
    }

    #[test]
    fn schur_apply_matches_explicit() {
        let m = random_matrix(12, 12, 9) + CMat::identity(12, 12) * c(6.0);
        let e = SchurEigen::new(&m).unwrap();
        let b = random_matrix(12, 1, 10).column(0).clone_owned();
        // f(z) = z reproduces the matrix-vector product
        let x = e.apply(&b, Ok).unwrap();
        assert!((x - &m * &b).norm() <= 1e-10 * b.norm() * m.norm());
        assert!(e.condition_estimate() < 1e4);
    }

    #[test]
    fn generalized_examples() {
        let a = CMat::from_diagonal(&CVec::from_vec(vec![c(2.0), c(6.0)]));
        let b = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0), c(2.0)]));
        let (vals, _) = generalized_eig(&a, &b).unwrap();
        let mut v: Vec<f64> = vals.iter().map(|z| z.re).collect();
        v.sort_by(f64::total_cmp);
        assert!((v[0] - 2.0).abs() < 1e-12 && (v[1] - 3.0).abs() < 1e-12);

        let a = random_matrix(10, 10, 21);
        let b = random_matrix(10, 10, 22);
        let (vals, vecs) = generalized_eig(&a, &b).unwrap();
        for i in 0..10 {
            let g = vecs.column(i);
            let r = &a * g - &b * g * vals[i];
            let scale = (a.norm() + vals[i].norm() * b.norm()) * g.norm();
            assert!(r.norm() <= 1e-8 * scale);
        }
        let mut sing = CMat::identity(3, 3);
        sing[(1, 1)] = c(0.0);
        assert!(matches!(
            generalized_eig(&CMat::identity(3, 3), &sing),
            Err(Error::SingularPencil { .. })
        ));
    }

    #[test]
    fn generalized_with_identity_matches_standard() {
        let a = random_hermitian(12, 31);
        let (g, _) = generalized_eig(&a, &CMat::identity(12, 12)).unwrap();
        let (e, _) = eig_dense(&a, true).unwrap();
        let mut gv: Vec<f64> = g.iter().map(|z| z.re).collect();
        gv.sort_by(f64::total_cmp);
        for (x, y) in gv.iter().zip(e.iter()) {
            assert!((x - y.re).abs() <= 1e-8);
        }
    }

    #[test]
    fn hpd_pencil_residual() {
        let r = random_matrix(8, 8, 41);
        let a = r.ad_mul(&r) + CMat::identity(8, 8);
        let b = random_matrix(8, 8, 42);
        let (mu, g) = hpd_pencil_eig(&a, &b).unwrap();
        for i in 0..8 {
            let gi = g.column(i);
            let res = &b * gi - &a * gi * mu[i];
            assert!(res.norm() <= 1e-10 * (b.norm() + mu[i].norm() * a.norm()) * gi.norm());
        }
    }

    #[test]
    fn svd_examples() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![c(3.0), c(-4.0)]));
        let s = svd_values(&m).unwrap();
        assert!((s[0] - 4.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14);

        let u = random_matrix(5, 1, 1);
        let v = random_matrix(4, 1, 2);
        let s = svd_values(&(&u * v.adjoint())).unwrap();
        assert!((s[0] - u.norm() * v.norm()).abs() < 1e-12);
        assert!(s[1..].iter().all(|&x| x < 1e-12));

        let m = random_matrix(6, 4, 3);
        let s = svd_values(&m).unwrap();
        let sq: f64 = s.iter().map(|x| x * x).sum();
        assert!((sq - m.norm_squared()).abs() <= 1e-12 * m.norm_squared());
    }
}
