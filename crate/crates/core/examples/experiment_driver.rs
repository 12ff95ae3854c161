//! The configurable driver, used as a library: a short recycled sequence
//! followed by a quadrature sweep, both printed as CSV.

use rfom2::experiment::{run_experiment, sweep_quadrature, ExperimentConfig};

const CONFIG: &str = r#"
problem = "gauge_laplacian"
mesh = 12
mass = 0.2
function = "invsqrt"
quadrature = "stieltjes"
j = 30
k = 10
n_quad = 40
engines = ["arnoldi", "v2"]
sequence_length = 4
epsilon = 1e-3
track_angle = true
"#;

fn main() -> rfom2::Result<()> {
    let cfg = ExperimentConfig::from_toml_str(CONFIG)?;
    print!("{}", run_experiment(&cfg)?.to_csv());

    println!();
    let sweep = sweep_quadrature(&cfg, &[5, 10, 20, 40])?;
    print!("{}", sweep.to_csv());
    Ok(())
}
