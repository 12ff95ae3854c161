//! Recycled and augmented FOM approximations of `f(A)b` for sequences of
//! matrices and right-hand sides.
//!
//! The crate provides
//!
//! * an Arnoldi process and the shifted FOM iterates it induces ([`arnoldi`]),
//! * contour and Stieltjes quadrature rules ([`quadrature`]),
//! * the approximation engines: plain Arnoldi in direct and quadrature form
//!   and three formulations of the augmented method ([`rfom`]),
//! * harmonic Ritz updates of the augmentation space ([`recycling`]),
//! * test problems, a Matrix Market reader and a dense reference solver
//!   ([`problems`]),
//! * a configurable experiment driver writing CSV reports ([`experiment`]).
//!
//! ```
//! use rfom2::prelude::*;
//!
//! let a = laplacian_2d(8);
//! let b = CVec::from_element(64, c64::new(1.0, 0.0));
//! let dec = arnoldi(&a, &b, 20, true).unwrap();
//! let f = FunctionSpec::by_name("inverse").unwrap();
//! let x = arnoldi_direct(&dec, &f).unwrap();
//! assert!((a.mul_vec(&x) - &b).norm() < 1e-2 * b.norm());
//! ```

pub mod arnoldi;
pub mod dense;
pub mod error;
pub mod experiment;
pub mod functions;
pub mod problems;
pub mod quadrature;
pub mod recycling;
pub mod rfom;
pub mod sparse;

/// Double precision complex scalar.
#[allow(non_camel_case_types)]
pub type c64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMat = nalgebra::DMatrix<c64>;
/// Dense complex vector.
pub type CVec = nalgebra::DVector<c64>;

pub use error::{Error, Result};

/// Everything needed for typical use.
pub mod prelude {
    pub use crate::arnoldi::{arnoldi, shifted_fom_solve, ArnoldiDecomposition};
    pub use crate::error::{Error, Result};
    pub use crate::functions::FunctionSpec;
    pub use crate::problems::{
        convection_diffusion_2d, DenseOracle, function_catalog, gauge_laplacian_2d, laplacian_2d,
        load_matrix_market, oracle_funm, random_vector, ProblemSequence, RhsPolicy,
    };
    pub use crate::quadrature::{
        stieltjes_invsqrt, suggest_contour, trapezoid_contour, CircleContour, QuadratureRule,
    };
    pub use crate::recycling::{harmonic_ritz_update, subspace_angle};
    pub use crate::rfom::{
        arnoldi_direct, arnoldi_quad, auto_contour, choose_d, rfom_v1, rfom_v2, rfom_v3, DPolicy,
        Engine, RecycleSubspace,
    };
    pub use crate::sparse::{LinearOperator, SparseMatrix};
    pub use crate::{c64, CMat, CVec};
}

#[cfg(test)]
pub(crate) mod test_util {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    use crate::{c64, CMat, CVec};

    fn normal_c64(rng: &mut ChaCha8Rng) -> c64 {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c64::new(re, im)
    }

    /// Complex Gaussian matrix.
    pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> CMat {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CMat::from_fn(rows, cols, |_, _| normal_c64(&mut rng))
    }

    pub fn random_vector(n: usize, seed: u64) -> CVec {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CVec::from_fn(n, |_, _| normal_c64(&mut rng))
    }

    /// `(R + Rᴴ)/2` for a complex Gaussian `R`.
    pub fn random_hermitian(n: usize, seed: u64) -> CMat {
        let r = random_matrix(n, n, seed);
        (&r + r.adjoint()) * c64::new(0.5, 0.0)
    }
}
