//! Matrix sign function of an indefinite Hermitian matrix, computed as
//! `A (A²)^{-1/2} b`: the Krylov space is built for `A²` from `A b`.

use rfom2::prelude::*;
use rfom2::sparse::Squared;

fn main() -> rfom2::Result<()> {
    // negative mass shifts part of the spectrum below zero
    let a = gauge_laplacian_2d(12, -0.3, 4);
    let n = a.nrows();
    let b = random_vector(n, 9, false);
    let sign = FunctionSpec::by_name("sign_via_invsqrt")?;
    let exact = oracle_funm(&a.to_dense(), &sign, &b, true)?;

    let inv_sqrt = sign.integrand();
    let a2 = Squared(&a);
    let ab = a.mul_vec(&b);
    let rule = stieltjes_invsqrt(80)?;
    for j in [20, 40, 80, 120] {
        let dec = arnoldi(&a2, &ab, j, true)?;
        let x = rfom_v2(&dec, &RecycleSubspace::empty(n), &inv_sqrt, &rule)?;
        println!("j = {j:>3}: rel. error {:.3e}", (&x - &exact).norm() / exact.norm());
    }
    Ok(())
}
