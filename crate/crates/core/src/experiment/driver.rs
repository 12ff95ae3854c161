//! Runs problem sequences through the engines and collects report rows.

use std::time::Instant;

use crate::arnoldi::{arnoldi, ArnoldiDecomposition};
use crate::dense::qr_orthonormalize;
use crate::error::{Error, Result};
use crate::functions::{FunctionKind, FunctionSpec};
use crate::problems::{DenseOracle, ProblemSequence};
use crate::quadrature::{
    stieltjes_invsqrt, trapezoid_contour, CircleContour, QuadratureRule,
};
use crate::recycling::{harmonic_ritz_basis, subspace_angle};
use crate::rfom::{arnoldi_direct, auto_contour, Engine, RecycleSubspace};
use crate::sparse::{LinearOperator, SparseMatrix, Squared};
use crate::{c64, CMat, CVec};

use super::config::{ExperimentConfig, QuadratureKind, RecycleSource};
use super::report::{ReportRow, RunReport};

struct Setup {
    fun: FunctionSpec,
    integrand: FunctionSpec,
    sign: bool,
    hermitian: bool,
    seq: ProblemSequence,
}

impl Setup {
    fn new(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let fun = cfg.function_spec()?;
        let integrand = fun.integrand();
        let sign = matches!(fun.kind(), FunctionKind::SignViaInvSqrt);
        let base = cfg.build_operator()?;
        let hermitian = cfg.hermitian.unwrap_or_else(|| base.is_hermitian(1e-12));
        let seq = ProblemSequence {
            base,
            length: cfg.sequence_length,
            epsilon: cfg.epsilon,
            rhs: cfg.rhs,
            seed: cfg.seed,
            hermitian,
        };
        Ok(Self { fun, integrand, sign, hermitian, seq })
    }
}

/// Operator and right-hand side seen by the Krylov engines. The sign
/// function is computed as `(A²)^{-1/2}(A b)`.
fn krylov_problem<'a>(a: &'a SparseMatrix, b: &CVec, sign: bool) -> (Box<dyn LinearOperator + 'a>, CVec) {
    if sign {
        (Box::new(Squared(a)), a.mul_vec(b))
    } else {
        (Box::new(a), b.clone())
    }
}

fn status_of(err: &Error) -> String {
    format!("error:{}", err.kind())
}

fn build_rule(
    cfg: &ExperimentConfig,
    integrand: &FunctionSpec,
    n_quad: usize,
    dec: Option<&ArnoldiDecomposition>,
    rec: Option<&RecycleSubspace>,
) -> Result<QuadratureRule> {
    match cfg.quadrature {
        QuadratureKind::Stieltjes => stieltjes_invsqrt(n_quad),
        QuadratureKind::Contour => {
            let circle = match (cfg.contour_center, cfg.contour_radius) {
                (Some(c), Some(r)) => CircleContour::new(c.value(), r)?,
                _ => {
                    let dec = dec.ok_or_else(|| {
                        Error::InvalidArgument("automatic contour needs a Krylov basis".into())
                    })?;
                    let empty;
                    let rec = match rec {
                        Some(r) => r,
                        None => {
                            empty = RecycleSubspace::empty(dec.dim());
                            &empty
                        }
                    };
                    auto_contour(dec, rec, integrand, cfg.contour_margin)?
                }
            };
            trapezoid_contour(circle, n_quad)
        }
    }
}

/// Per-problem inputs shared by all engines.
struct ProblemState<'a> {
    index: usize,
    dec: &'a Result<ArnoldiDecomposition>,
    rec: &'a Result<RecycleSubspace>,
    exact: Option<&'a Result<CVec>>,
    real: bool,
}

fn evaluate_engines(
    cfg: &ExperimentConfig,
    setup: &Setup,
    state: &ProblemState<'_>,
    n_quad: usize,
    rule: &Result<QuadratureRule>,
) -> Vec<ReportRow> {
    let mut rows = Vec::with_capacity(cfg.engines.len());
    let mut gap_reference: Option<CVec> = None;
    for &engine in &cfg.engines {
        let k_used = match (engine.is_augmented(), state.rec) {
            (true, Ok(rec)) => rec.k(),
            _ => 0,
        };
        let mut row = ReportRow {
            problem_index: state.index,
            engine: engine.name().to_string(),
            j: cfg.j,
            k: k_used,
            n_quad,
            rel_error: f64::NAN,
            imag_residue: f64::NAN,
            subspace_angle: f64::NAN,
            wall_ms: 0.0,
            status: "ok".into(),
        };
        let start = Instant::now();
        let result = (|| -> Result<CVec> {
            let dec = state.dec.as_ref().map_err(Clone::clone)?;
            let empty;
            let rec = if engine.is_augmented() {
                state.rec.as_ref().map_err(Clone::clone)?
            } else {
                empty = RecycleSubspace::empty(dec.dim());
                &empty
            };
            if engine == Engine::Arnoldi {
                return arnoldi_direct(dec, &setup.integrand);
            }
            let rule = rule.as_ref().map_err(Clone::clone)?;
            engine.evaluate(dec, rec, &setup.integrand, rule)
        })();
        row.wall_ms = start.elapsed().as_secs_f64() * 1e3;
        match result {
            Err(e) => row.status = status_of(&e),
            Ok(x) => {
                if state.real {
                    row.imag_residue = imaginary_residue(&x);
                }
                match state.exact {
                    Some(Ok(exact)) => row.rel_error = (&x - exact).norm() / exact.norm(),
                    Some(Err(e)) => row.status = status_of(e),
                    None => {
                        let reference = gap_reference.get_or_insert_with(|| x.clone());
                        row.rel_error = (&x - &*reference).norm() / reference.norm();
                    }
                }
            }
        }
        rows.push(row);
    }
    rows
}

fn compute_oracle(cfg: &ExperimentConfig, setup: &Setup, a: &SparseMatrix) -> Option<Result<DenseOracle>> {
    (a.nrows() <= cfg.oracle_max_dim).then(|| {
        DenseOracle::new(&a.to_dense(), setup.hermitian, cfg.oracle_max_dim, cfg.condition_limit)
    })
}

/// Walks the sequence. Problems for which `evaluate(i)` is false only
/// advance the recycle space.
fn drive(cfg: &ExperimentConfig, n_list: &[usize], evaluate_at: impl Fn(usize) -> bool) -> Result<RunReport> {
    let setup = Setup::new(cfg)?;
    let mut report = RunReport::default();
    let mut pending_u: Option<CMat> = None;
    let mut cached_oracle: Option<Option<Result<DenseOracle>>> = None;

    for (idx, item) in setup.seq.iter().enumerate() {
        let i = idx + 1;
        let (a, b) = item?;
        let (op, rhs) = krylov_problem(&a, &b, setup.sign);
        let evaluate = evaluate_at(i);
        let needs_oracle = evaluate
            || (cfg.k > 0 && cfg.recycle_source == RecycleSource::ExactEigenvectors)
            || cfg.track_angle;

        let fresh;
        let oracle: Option<&Result<DenseOracle>> = if !needs_oracle {
            None
        } else if cfg.epsilon == 0.0 {
            cached_oracle.get_or_insert_with(|| compute_oracle(cfg, &setup, &a)).as_ref()
        } else {
            fresh = compute_oracle(cfg, &setup, &a);
            fresh.as_ref()
        };

        let rec: Result<RecycleSubspace> = if cfg.k == 0 {
            Ok(RecycleSubspace::empty(a.nrows()))
        } else {
            match cfg.recycle_source {
                RecycleSource::HarmonicRitz => match pending_u.take() {
                    Some(u) => RecycleSubspace::from_basis(&*op, u, cfg.d_policy),
                    None => Ok(RecycleSubspace::empty(a.nrows())),
                },
                RecycleSource::ExactEigenvectors => match oracle {
                    // eigenvectors of a nonnormal matrix can be nearly dependent;
                    // only their span matters, so pass an orthonormal basis of it
                    Some(Ok(o)) => qr_orthonormalize(&o.smallest_eigenvectors(cfg.k))
                        .and_then(|(q, _)| RecycleSubspace::from_basis(&*op, q, cfg.d_policy)),
                    Some(Err(e)) => Err(e.clone()),
                    None => Err(Error::InvalidArgument(format!(
                        "exact eigenvectors need the dense oracle (dimension {} above oracle_max_dim)",
                        a.nrows()
                    ))),
                },
            }
        };

        let dec = arnoldi(&*op, &rhs, cfg.j, cfg.reorthogonalize);

        let next_u = if cfg.k > 0 && cfg.recycle_source == RecycleSource::HarmonicRitz {
            let base = match &rec {
                Ok(r) => r.clone(),
                Err(_) => RecycleSubspace::empty(a.nrows()),
            };
            match dec.as_ref().map_err(Clone::clone).and_then(|d| harmonic_ritz_basis(d, &base, cfg.k)) {
                Ok(u) => Some(u),
                Err(e) => {
                    report.notes.push(format!("problem {i}: recycle update failed: {e}"));
                    None
                }
            }
        } else {
            None
        };

        if evaluate {
            let exact: Option<Result<CVec>> = oracle.map(|o| {
                o.as_ref().map_err(Clone::clone).and_then(|o| o.apply(&setup.fun, &b))
            });
            let state = ProblemState {
                index: i,
                dec: &dec,
                rec: &rec,
                exact: exact.as_ref(),
                real: a.is_real_valued() && b.iter().all(|z| z.im == 0.0),
            };
            let angle = if cfg.track_angle && cfg.k > 0 && setup.hermitian {
                let u = match cfg.recycle_source {
                    RecycleSource::HarmonicRitz => next_u.clone(),
                    RecycleSource::ExactEigenvectors => rec.as_ref().ok().map(|r| r.u().clone()),
                };
                match (u, oracle) {
                    (Some(u), Some(Ok(o))) if u.ncols() > 0 => {
                        subspace_angle(&u, &o.smallest_eigenvectors(cfg.k)).unwrap_or(f64::NAN)
                    }
                    _ => f64::NAN,
                }
            } else {
                f64::NAN
            };
            for &n_quad in n_list {
                let rule = build_rule(cfg, &setup.integrand, n_quad, dec.as_ref().ok(), rec.as_ref().ok());
                let mut rows = evaluate_engines(cfg, &setup, &state, n_quad, &rule);
                for r in &mut rows {
                    r.subspace_angle = angle;
                }
                report.rows.extend(rows);
            }
        }
        pending_u = next_u;
    }
    Ok(report)
}

/// Runs the configured sequence: one row per problem and engine.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    drive(cfg, &[cfg.n_quad], |_| true)
}

/// Evaluates the last problem of the sequence for every `n_quad` in
/// `n_list`, after advancing the recycle space through the earlier ones.
pub fn sweep_quadrature(cfg: &ExperimentConfig, n_list: &[usize]) -> Result<RunReport> {
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(Error::Config("n_quad list must hold positive counts".into()));
    }
    let last = cfg.sequence_length;
    drive(cfg, n_list, |i| i == last)
}

/// `‖Im x‖ / ‖x‖`.
pub fn imaginary_residue(x: &CVec) -> f64 {
    let im = x.iter().map(|z: &c64| z.im * z.im).sum::<f64>().sqrt();
    im / x.norm()
}
