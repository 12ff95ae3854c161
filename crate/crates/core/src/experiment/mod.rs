//! Batch experiments: configuration, the sequence driver and CSV reports.

mod config;
mod driver;
mod report;

pub use config::{
    ExperimentConfig, ProblemKind, QuadratureKind, RecycleSource, ScalarValue, DATA_DIR_VAR,
};
pub use driver::{imaginary_residue, run_experiment, sweep_quadrature};
pub use report::{ReportRow, RunReport, CSV_HEADER};
