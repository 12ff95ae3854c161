//! Arnoldi decomposition and shifted FOM solves from a single basis.

use rfom2::prelude::*;

fn main() -> rfom2::Result<()> {
    let a = laplacian_2d(30);
    let b = random_vector(a.nrows(), 1, true);
    let dec = arnoldi(&a, &b, 60, true)?;
    println!("n = {}, j = {}, h_(j+1,j) = {:.3e}", dec.dim(), dec.steps(), dec.subdiagonal().norm());

    // one basis serves every shift
    for s in [0.0, -1.0, -10.0] {
        let sigma = c64::new(s, 0.0);
        let x = shifted_fom_solve(&dec, sigma)?;
        // FOM approximates (sigma I - A)^{-1} b
        let r = &b - (x.map(|v| v * sigma) - a.mul_vec(&x));
        println!("sigma = {s:>6}: residual {:.3e}", r.norm() / b.norm());
    }

    let sigma = c64::new(1.0, 3.0);
    let x = shifted_fom_solve(&dec, sigma)?;
    let r = &b - (x.map(|v| v * sigma) - a.mul_vec(&x));
    println!("sigma = {sigma}: residual {:.3e}", r.norm() / b.norm());
    Ok(())
}
