//! Writes a test matrix in Matrix Market format, reads it back and
//! approximates `exp(-A) b` for it.

use rfom2::prelude::*;
use rfom2::problems::save_matrix_market;

fn main() -> rfom2::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("rfom2_convection.mtx"));

    let a = convection_diffusion_2d(15, 5.0);
    save_matrix_market(&a, &path)?;
    let back = load_matrix_market(&path)?;
    println!("{}: {}x{}, {} nonzeros", path.display(), back.nrows(), back.ncols(), back.nnz());
    assert_eq!(back.to_dense(), a.to_dense());

    let neg_exp = FunctionSpec::custom("exp(-z)", |z| (-z).exp(), None);
    let b = random_vector(back.nrows(), 0, true);
    let exact = oracle_funm(&back.to_dense(), &neg_exp, &b, false)?;
    for j in [5, 10, 20] {
        let dec = arnoldi(&back, &b, j, true)?;
        let x = arnoldi_direct(&dec, &neg_exp)?;
        println!("j = {j:>2}: rel. error {:.3e}", (&x - &exact).norm() / exact.norm());
    }
    Ok(())
}
