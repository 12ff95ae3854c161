//! Every engine on one augmented problem, checked against the dense
//! reference.

use rfom2::prelude::*;

fn main() -> rfom2::Result<()> {
    let a = gauge_laplacian_2d(12, 0.3, 7);
    let n = a.nrows();
    let fun = FunctionSpec::by_name("invsqrt")?;
    let b = random_vector(n, 2, false);
    let exact = oracle_funm(&a.to_dense(), &fun, &b, true)?;

    // a recycle space from an earlier solve with another right-hand side
    let first = arnoldi(&a, &random_vector(n, 1, false), 20, true)?;
    let rec = harmonic_ritz_update(&first, &RecycleSubspace::empty(n), &a, 10, DPolicy::Identity)?;
    let dec = arnoldi(&a, &b, 20, true)?;

    let circle = auto_contour(&dec, &rec, &fun, 0.1)?;
    println!("contour: center {:.3}, radius {:.3}", circle.center, circle.radius);
    let rules = [("contour", trapezoid_contour(circle, 400)?), ("stieltjes", stieltjes_invsqrt(60)?)];

    for (label, rule) in &rules {
        println!("\n{label} rule, {} nodes", rule.len());
        for engine in Engine::ALL {
            let x = engine.evaluate(&dec, &rec, &fun, rule)?;
            println!("  {:<12} rel. error {:.3e}", engine.name(), (&x - &exact).norm() / exact.norm());
        }
    }
    Ok(())
}
