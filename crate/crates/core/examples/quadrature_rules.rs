//! Circle and Stieltjes rules applied to scalar functions.

use rfom2::prelude::*;

fn main() -> rfom2::Result<()> {
    let inv = FunctionSpec::by_name("inverse")?;
    let circle = suggest_contour(&[c64::new(0.5, 0.0), c64::new(4.0, 0.0)], 0.1, Some(&inv))?;
    println!("contour: center {}, radius {:.4}", circle.center, circle.radius);

    let x = c64::new(2.0, 0.0);
    println!("\n1/x at x = 2 with the circle rule");
    for n in [8, 16, 32, 64, 128] {
        let rule = trapezoid_contour(circle, n)?;
        let coeffs = rule.coefficients(&inv)?;
        let approx: c64 = rule.nodes().iter().zip(&coeffs).map(|(z, mu)| mu / (z - x)).sum();
        println!("{n:>5} nodes: error {:.2e}", (approx - 0.5).norm());
    }

    println!("\nx^(-1/2) at x = 2 with the Stieltjes rule");
    for n in [4, 8, 16, 32, 64] {
        let rule = stieltjes_invsqrt(n)?;
        // negative nodes, so the sum is a combination of shifted inverses
        let approx = rule.sum(|s| 1.0 / (s - x));
        println!("{n:>5} nodes: error {:.2e}", (approx - 0.5f64.sqrt()).norm());
    }
    Ok(())
}
