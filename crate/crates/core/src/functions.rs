//! Scalar functions and their dense matrix counterparts.

use std::fmt;
use std::sync::Arc;

use crate::dense::{is_hermitian, HermitianEigen, Lu, SchurEigen};
use crate::error::{Error, Result};
use crate::quadrature::CircleContour;
use crate::{c64, CMat, CVec};

/// Largest accepted condition estimate of an eigenvector basis in the
/// general (non-Hermitian) dense path.
pub const DEFAULT_CONDITION_LIMIT: f64 = 1e8;

const HERMITIAN_RTOL: f64 = 1e-10;

type ScalarFn = Arc<dyn Fn(c64) -> c64 + Send + Sync>;

#[derive(Clone)]
pub enum FunctionKind {
    Inverse,
    InvSqrt,
    Sqrt,
    Log,
    Exp,
    /// `sign(z) = z (z²)^{-1/2}`.
    SignViaInvSqrt,
    Custom(ScalarFn),
}

impl fmt::Debug for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Inverse => write!(f, "Inverse"),
            Self::InvSqrt => write!(f, "InvSqrt"),
            Self::Sqrt => write!(f, "Sqrt"),
            Self::Log => write!(f, "Log"),
            Self::Exp => write!(f, "Exp"),
            Self::SignViaInvSqrt => write!(f, "SignViaInvSqrt"),
            Self::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// A function `f` with matching scalar and dense evaluators.
#[derive(Clone, Debug)]
pub struct FunctionSpec {
    name: String,
    kind: FunctionKind,
    singularity: Option<c64>,
    condition_limit: f64,
}

impl FunctionSpec {
    /// One of `inverse`, `invsqrt`, `sqrt`, `log`, `exp`, `sign_via_invsqrt`.
    pub fn by_name(name: &str) -> Result<Self> {
        let zero = Some(c64::new(0.0, 0.0));
        let (kind, singularity) = match name {
            "inverse" => (FunctionKind::Inverse, zero),
            "invsqrt" => (FunctionKind::InvSqrt, zero),
            "sqrt" => (FunctionKind::Sqrt, zero),
            "log" => (FunctionKind::Log, zero),
            "exp" => (FunctionKind::Exp, None),
            "sign_via_invsqrt" => (FunctionKind::SignViaInvSqrt, zero),
            other => return Err(Error::UnknownFunction(other.to_string())),
        };
        Ok(Self { name: name.to_string(), kind, singularity, condition_limit: DEFAULT_CONDITION_LIMIT })
    }

    /// An entire or user-guarded function given by a closure. The dense
    /// evaluator diagonalizes.
    pub fn custom<F>(name: &str, f: F, singularity: Option<c64>) -> Self
    where
        F: Fn(c64) -> c64 + Send + Sync + 'static,
    {
        Self {
            name: name.to_string(),
            kind: FunctionKind::Custom(Arc::new(f)),
            singularity,
            condition_limit: DEFAULT_CONDITION_LIMIT,
        }
    }

    pub fn with_condition_limit(mut self, limit: f64) -> Self {
        self.condition_limit = limit;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn singularity(&self) -> Option<c64> {
        self.singularity
    }

    pub fn condition_limit(&self) -> f64 {
        self.condition_limit
    }

    pub fn is_inverse_sqrt(&self) -> bool {
        matches!(self.kind, FunctionKind::InvSqrt)
    }

    /// The function actually integrated by the engines. For the sign
    /// function this is `z^{-1/2}`, applied to `A²` and `A b`.
    pub fn integrand(&self) -> FunctionSpec {
        match self.kind {
            FunctionKind::SignViaInvSqrt => FunctionSpec::by_name("invsqrt")
                .expect("catalog name")
                .with_condition_limit(self.condition_limit),
            _ => self.clone(),
        }
    }

    fn undefined(&self, z: c64) -> Error {
        Error::FunctionUndefined { function: self.name.clone(), at: z.to_string() }
    }

    pub fn scalar(&self, z: c64) -> Result<c64> {
        let one = c64::new(1.0, 0.0);
        match &self.kind {
            FunctionKind::Inverse => {
                if z == c64::new(0.0, 0.0) {
                    Err(self.undefined(z))
                } else {
                    Ok(one / z)
                }
            }
            FunctionKind::InvSqrt if on_branch_cut(z) => Err(self.undefined(z)),
            FunctionKind::InvSqrt => Ok(one / z.sqrt()),
            FunctionKind::Sqrt if z.re < 0.0 && on_branch_cut(z) => Err(self.undefined(z)),
            FunctionKind::Sqrt => Ok(z.sqrt()),
            FunctionKind::Log if on_branch_cut(z) => Err(self.undefined(z)),
            FunctionKind::Log => Ok(z.ln()),
            FunctionKind::Exp => Ok(z.exp()),
            FunctionKind::SignViaInvSqrt => {
                if z.re.abs() <= 8.0 * f64::EPSILON * z.norm() {
                    Err(self.undefined(z))
                } else {
                    Ok(c64::new(z.re.signum(), 0.0))
                }
            }
            FunctionKind::Custom(f) => {
                let v = f(z);
                if v.re.is_finite() && v.im.is_finite() {
                    Ok(v)
                } else {
                    Err(self.undefined(z))
                }
            }
        }
    }

    /// Distance from `c` to the set where `f` is not analytic, or `None`
    /// when `f` is entire or its singularities are unknown.
    pub fn clearance(&self, c: c64) -> Option<f64> {
        Some(match &self.kind {
            FunctionKind::Exp => return None,
            FunctionKind::Inverse => c.norm(),
            // distance from c to (−∞, 0]
            FunctionKind::InvSqrt | FunctionKind::Sqrt | FunctionKind::Log => {
                if c.re <= 0.0 {
                    c.im.abs()
                } else {
                    c.norm()
                }
            }
            FunctionKind::SignViaInvSqrt => c.re.abs(),
            FunctionKind::Custom(_) => (self.singularity? - c).norm(),
        })
    }

    /// Rejects circles that pass through or enclose a point where `f` is
    /// not analytic.
    pub fn check_contour(&self, circle: &CircleContour) -> Result<()> {
        let r = circle.radius;
        match self.clearance(circle.center) {
            Some(d) if d <= r => Err(Error::InvalidArgument(format!(
                "circle c = {}, r = {r} meets the singular set of {}",
                circle.center, self.name
            ))),
            _ => Ok(()),
        }
    }

    /// `f(M)·B`, factorizing `M` once. Hermitian `M` goes through a unitary
    /// eigendecomposition, other matrices through Schur-based
    /// diagonalization guarded by the condition limit, and the inverse
    /// through LU.
    pub fn apply_dense_mat(&self, m: &CMat, rhs: &CMat) -> Result<CMat> {
        if m.nrows() != m.ncols() || m.nrows() != rhs.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "f(M)B with M {}x{} and B {}x{}",
                m.nrows(),
                m.ncols(),
                rhs.nrows(),
                rhs.ncols()
            )));
        }
        if matches!(self.kind, FunctionKind::Inverse) {
            let lu = Lu::new(m).map_err(|_| self.undefined(c64::new(0.0, 0.0)))?;
            return Ok(lu.solve_mat(rhs));
        }
        let mut out = CMat::zeros(m.nrows(), rhs.ncols());
        if is_hermitian(m, HERMITIAN_RTOL) {
            let eig = HermitianEigen::new(m)?;
            for (j, col) in rhs.column_iter().enumerate() {
                let x = eig.apply(&col.clone_owned(), |lam| self.scalar(c64::new(lam, 0.0)))?;
                out.set_column(j, &x);
            }
        } else {
            let eig = SchurEigen::new(m)?;
            let estimate = eig.condition_estimate();
            if !(estimate <= self.condition_limit) {
                return Err(Error::IllConditionedEigenbasis { estimate, limit: self.condition_limit });
            }
            for (j, col) in rhs.column_iter().enumerate() {
                let x = eig.apply(&col.clone_owned(), |lam| self.scalar(lam))?;
                out.set_column(j, &x);
            }
        }
        Ok(out)
    }

    pub fn apply_dense(&self, m: &CMat, b: &CVec) -> Result<CVec> {
        let rhs = CMat::from_column_slice(b.len(), 1, b.as_slice());
        let x = self.apply_dense_mat(m, &rhs)?;
        Ok(x.column(0).clone_owned())
    }

    /// The matrix `f(M)`.
    pub fn dense(&self, m: &CMat) -> Result<CMat> {
        self.apply_dense_mat(m, &CMat::identity(m.nrows(), m.nrows()))
    }
}

/// `z ∈ (−∞, 0]` up to roundoff in the imaginary part.
fn on_branch_cut(z: c64) -> bool {
    z.re <= 0.0 && z.im.abs() <= 8.0 * f64::EPSILON * z.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::{random_hermitian, random_matrix};

    fn c(re: f64) -> c64 {
        c64::new(re, 0.0)
    }

    fn diag(v: &[f64]) -> CMat {
        CMat::from_diagonal(&CVec::from_iterator(v.len(), v.iter().map(|&x| c(x))))
    }

    #[test]
    fn catalog_scalars() {
        let f = FunctionSpec::by_name("invsqrt").unwrap();
        assert!((f.scalar(c(9.0)).unwrap() - c(1.0 / 3.0)).norm() < 1e-15);
        assert!(matches!(f.scalar(c(-1.0)), Err(Error::FunctionUndefined { .. })));
        assert!(matches!(FunctionSpec::by_name("cosh"), Err(Error::UnknownFunction(_))));
        let s = FunctionSpec::by_name("sqrt").unwrap();
        assert_eq!(s.scalar(c(0.0)).unwrap(), c(0.0));
        assert!(FunctionSpec::by_name("inverse").unwrap().scalar(c(0.0)).is_err());
    }

    #[test]
    fn dense_log_and_sign_on_diagonals() {
        let log = FunctionSpec::by_name("log").unwrap();
        let l = log.dense(&diag(&[1.0, std::f64::consts::E])).unwrap();
        assert!((l - diag(&[0.0, 1.0])).norm() < 1e-14);
        let sign = FunctionSpec::by_name("sign_via_invsqrt").unwrap();
        let s = sign.dense(&diag(&[-2.0, 3.0])).unwrap();
        assert!((s - diag(&[-1.0, 1.0])).norm() < 1e-14);
    }

    #[test]
    fn diagonal_consistency() {
        for name in ["inverse", "invsqrt", "sqrt", "log", "exp", "sign_via_invsqrt"] {
            let f = FunctionSpec::by_name(name).unwrap();
            let d = [0.5, 1.5, 3.0, 7.25];
            let expected = diag(&d).map(|z| if z == c(0.0) { z } else { f.scalar(z).unwrap() });
            assert!((f.dense(&diag(&d)).unwrap() - expected).norm() < 1e-10, "{name}");
        }
    }

    #[test]
    fn general_path_matches_hermitian_path() {
        let h = random_hermitian(12, 3) + CMat::identity(12, 12) * c(10.0);
        let f = FunctionSpec::by_name("sqrt").unwrap();
        let herm = f.dense(&h).unwrap();
        // an equivalent non-Hermitian similarity transform
        let s = random_matrix(12, 12, 4) * c(0.1) + CMat::identity(12, 12);
        let sinv = Lu::new(&s).unwrap().inverse();
        let gen = f.dense(&(&s * &h * &sinv)).unwrap();
        assert!((gen - &s * herm * &sinv).norm() < 1e-9 * 12.0);
    }

    #[test]
    fn contour_guards() {
        let circle = CircleContour::new(c(4.0), 3.9).unwrap();
        for name in ["inverse", "log", "invsqrt", "sign_via_invsqrt", "exp"] {
            assert!(FunctionSpec::by_name(name).unwrap().check_contour(&circle).is_ok());
        }
        let wide = CircleContour::new(c(4.0), 4.5).unwrap();
        assert!(FunctionSpec::by_name("log").unwrap().check_contour(&wide).is_err());
        assert!(FunctionSpec::by_name("exp").unwrap().check_contour(&wide).is_ok());
        let above = CircleContour::new(c64::new(-3.0, 2.0), 1.0).unwrap();
        assert!(FunctionSpec::by_name("log").unwrap().check_contour(&above).is_ok());
    }

    #[test]
    fn custom_function_flags_non_finite() {
        let f = FunctionSpec::custom("recip", |z| 1.0 / z, Some(c(0.0)));
        assert!((f.scalar(c(2.0)).unwrap() - c(0.5)).norm() < 1e-15);
        assert!(f.scalar(c(0.0)).is_err());
    }
}
