//! A slowly changing sequence of Hermitian matrices: the harmonic Ritz
//! space of each solve is carried to the next one.

use rfom2::dense::HermitianEigen;
use rfom2::prelude::*;

fn main() -> rfom2::Result<()> {
    let fun = FunctionSpec::by_name("invsqrt")?;
    let (j, k) = (20, 15);
    let seq = ProblemSequence {
        base: gauge_laplacian_2d(16, 0.1, 3),
        length: 6,
        epsilon: 1e-4,
        rhs: RhsPolicy::RandomEach,
        seed: 5,
        hermitian: true,
    };
    let rule = stieltjes_invsqrt(40)?;
    let n = seq.base.nrows();
    let mut rec = RecycleSubspace::empty(n);

    println!("{:>3} {:>12} {:>12} {:>10}", "i", "arnoldi", "rfom v2", "angle");
    for (i, step) in seq.iter().enumerate() {
        let (a, b) = step?;
        let dense = a.to_dense();
        let exact = oracle_funm(&dense, &fun, &b, true)?;
        let dec = arnoldi(&a, &b, j, true)?;
        let plain = arnoldi_direct(&dec, &fun)?;
        let aug = rfom_v2(&dec, &rec, &fun, &rule)?;

        // distance of the recycle space to the wanted invariant subspace
        let angle = if rec.k() > 0 {
            let eig = HermitianEigen::new(&dense)?;
            subspace_angle(rec.u(), &eig.vectors.columns(0, k).clone_owned())?
        } else {
            f64::NAN
        };
        let err = |x: &CVec| (x - &exact).norm() / exact.norm();
        println!("{:>3} {:>12.3e} {:>12.3e} {:>10.4}", i + 1, err(&plain), err(&aug), angle);

        rec = harmonic_ritz_update(&dec, &rec, &a, k, DPolicy::Identity)?;
    }
    Ok(())
}
