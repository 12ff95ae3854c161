//! Test problems, Matrix Market input and the dense reference solver.

mod generators;
mod matrix_market;
mod oracle;

pub use generators::{
    convection_diffusion_2d, gauge_laplacian_2d, laplacian_2d, random_vector, ProblemSequence,
    RhsPolicy, SequenceIter,
};
pub use matrix_market::{
    load_matrix_market, read_matrix_market, save_matrix_market, write_matrix_market,
};
pub use oracle::{oracle_funm, DenseOracle, DEFAULT_GENERAL_MAX_DIM};

use crate::error::Result;
use crate::functions::FunctionSpec;

/// Looks up `inverse`, `invsqrt`, `sqrt`, `log`, `exp` or
/// `sign_via_invsqrt`.
pub fn function_catalog(name: &str) -> Result<FunctionSpec> {
    FunctionSpec::by_name(name)
}
