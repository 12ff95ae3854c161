//! Per-row experiment results and their CSV form.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub const CSV_HEADER: &str =
    "problem_index,engine,j,k,n_quad,rel_error,imag_residue,subspace_angle,wall_ms,status";

/// One `(problem, engine, n_quad)` result. Missing values are `NaN`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    /// 1-based position in the sequence.
    pub problem_index: usize,
    pub engine: String,
    pub j: usize,
    pub k: usize,
    pub n_quad: usize,
    pub rel_error: f64,
    pub imag_residue: f64,
    pub subspace_angle: f64,
    pub wall_ms: f64,
    /// `ok` or `error:<Kind>`.
    pub status: String,
}

impl ReportRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    pub fn error_kind(&self) -> Option<&str> {
        self.status.strip_prefix("error:")
    }
}

fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    pub rows: Vec<ReportRow>,
    /// Non-fatal events, such as a failed recycle-space update.
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn has_failures(&self) -> bool {
        self.rows.iter().any(|r| !r.is_ok())
    }

    /// Rows of one engine, in sequence order.
    pub fn engine_rows<'a>(&'a self, engine: &'a str) -> impl Iterator<Item = &'a ReportRow> + 'a {
        self.rows.iter().filter(move |r| r.engine == engine)
    }

    /// `rel_error` of every row of `engine`, in order.
    pub fn errors(&self, engine: &str) -> Vec<f64> {
        self.engine_rows(engine).map(|r| r.rel_error).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{:.3},{}",
                r.problem_index,
                r.engine,
                r.j,
                r.k,
                r.n_quad,
                fmt_float(r.rel_error),
                fmt_float(r.imag_residue),
                fmt_float(r.subspace_angle),
                r.wall_ms,
                r.status
            )
            .expect("writing to a String");
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let report = RunReport {
            rows: vec![
                ReportRow {
                    problem_index: 1,
                    engine: "v2".into(),
                    j: 30,
                    k: 0,
                    n_quad: 64,
                    rel_error: 1.25e-9,
                    imag_residue: f64::NAN,
                    subspace_angle: f64::NAN,
                    wall_ms: 2.5,
                    status: "ok".into(),
                },
                ReportRow {
                    problem_index: 2,
                    engine: "v3".into(),
                    j: 30,
                    k: 5,
                    n_quad: 64,
                    rel_error: f64::NAN,
                    imag_residue: f64::NAN,
                    subspace_angle: 0.5,
                    wall_ms: 0.0,
                    status: "error:SingularSystem".into(),
                },
            ],
            notes: Vec::new(),
        };
        let csv = report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "1,v2,30,0,64,1.25e-9,nan,nan,2.500,ok");
        assert_eq!(lines[2], "2,v3,30,5,64,nan,nan,5e-1,0.000,error:SingularSystem");
        assert!(report.has_failures());
        assert_eq!(report.rows[1].error_kind(), Some("SingularSystem"));
    }
}
