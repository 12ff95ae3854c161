//! Experiment configuration, read from a flat TOML file.

use std::env;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{FunctionSpec, DEFAULT_CONDITION_LIMIT};
use crate::problems::{
    convection_diffusion_2d, gauge_laplacian_2d, laplacian_2d, load_matrix_market, RhsPolicy,
    DEFAULT_GENERAL_MAX_DIM,
};
use crate::rfom::{DPolicy, Engine};
use crate::sparse::SparseMatrix;
use crate::c64;

/// Environment variable naming the directory relative matrix paths are
/// resolved against.
pub const DATA_DIR_VAR: &str = "RFOM2_DATA_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Laplacian,
    ConvectionDiffusion,
    GaugeLaplacian,
    MatrixMarket,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureKind {
    Contour,
    Stieltjes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecycleSource {
    /// Harmonic Ritz vectors from the previous problem.
    HarmonicRitz,
    /// Eigenvectors of the current matrix for the `k` eigenvalues of
    /// smallest modulus, from the dense oracle.
    ExactEigenvectors,
}

/// A complex number written either as `x` or as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ScalarValue {
    Real(f64),
    Complex([f64; 2]),
}

impl ScalarValue {
    pub fn value(self) -> c64 {
        match self {
            Self::Real(x) => c64::new(x, 0.0),
            Self::Complex([re, im]) => c64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub problem: ProblemKind,
    /// Grid points per direction for the generated problems.
    pub mesh: usize,
    pub convection: f64,
    pub mass: f64,
    /// Seed of the gauge field.
    pub matrix_seed: u64,
    pub matrix_file: Option<PathBuf>,
    /// Detected from the matrix when absent.
    pub hermitian: Option<bool>,
    pub function: String,
    pub j: usize,
    pub k: usize,
    pub n_quad: usize,
    pub quadrature: QuadratureKind,
    pub contour_center: Option<ScalarValue>,
    pub contour_radius: Option<f64>,
    /// Relative enlargement of the automatic contour.
    pub contour_margin: f64,
    pub engines: Vec<Engine>,
    pub sequence_length: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub rhs: RhsPolicy,
    pub d_policy: DPolicy,
    pub recycle_source: RecycleSource,
    pub track_angle: bool,
    pub oracle_max_dim: usize,
    pub condition_limit: f64,
    pub reorthogonalize: bool,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            problem: ProblemKind::Laplacian,
            mesh: 20,
            convection: 0.0,
            mass: 0.2,
            matrix_seed: 0,
            matrix_file: None,
            hermitian: None,
            function: "inverse".into(),
            j: 30,
            k: 0,
            n_quad: 100,
            quadrature: QuadratureKind::Contour,
            contour_center: None,
            contour_radius: None,
            contour_margin: 0.1,
            engines: Engine::ALL.to_vec(),
            sequence_length: 1,
            epsilon: 0.0,
            seed: 0,
            rhs: RhsPolicy::RandomEach,
            d_policy: DPolicy::Identity,
            recycle_source: RecycleSource::HarmonicRitz,
            track_angle: false,
            oracle_max_dim: DEFAULT_GENERAL_MAX_DIM,
            condition_limit: DEFAULT_CONDITION_LIMIT,
            reorthogonalize: true,
            output: None,
        }
    }
}

fn config_err(e: impl std::fmt::Display) -> Error {
    Error::Config(e.to_string())
}

/// Parses the right-hand side of a `key=value` override as a TOML value,
/// falling back to a bare string.
fn parse_override_value(raw: &str) -> toml::Value {
    match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.into())),
        Err(_) => toml::Value::String(raw.into()),
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Self::from_toml_with_overrides(text, &[])
    }

    /// Parses `text` after applying `key=value` overrides.
    pub fn from_toml_with_overrides(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = toml::from_str(text).map_err(config_err)?;
        for item in overrides {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override `{item}` is not key=value")))?;
            table.insert(key.trim().to_string(), parse_override_value(value.trim()));
        }
        let cfg: Self = table.try_into().map_err(config_err)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>, overrides: &[String]) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_with_overrides(&text, overrides)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        self.validate()?;
        toml::to_string(self).map_err(config_err)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.to_string()));
        if self.j == 0 {
            return fail("j must be at least 1");
        }
        if self.n_quad == 0 {
            return fail("n_quad must be at least 1");
        }
        if self.engines.is_empty() {
            return fail("engines must not be empty");
        }
        if self.sequence_length == 0 {
            return fail("sequence_length must be at least 1");
        }
        if !(self.epsilon >= 0.0) {
            return fail("epsilon must be nonnegative");
        }
        if self.problem == ProblemKind::MatrixMarket && self.matrix_file.is_none() {
            return fail("problem = \"matrix_market\" needs matrix_file");
        }
        if self.problem != ProblemKind::MatrixMarket && self.mesh == 0 {
            return fail("mesh must be positive");
        }
        if self.contour_radius.is_some() != self.contour_center.is_some() {
            return fail("contour_center and contour_radius go together");
        }
        if self.seed > i64::MAX as u64 || self.matrix_seed > i64::MAX as u64 {
            return fail("seeds must fit in a TOML integer (at most 2^63 - 1)");
        }
        if !(self.contour_margin > 0.0) {
            return fail("contour_margin must be positive");
        }
        let fun = self.function_spec()?;
        if self.quadrature == QuadratureKind::Stieltjes && !fun.integrand().is_inverse_sqrt() {
            return fail("the stieltjes rule needs function = \"invsqrt\" or \"sign_via_invsqrt\"");
        }
        Ok(())
    }

    pub fn function_spec(&self) -> Result<FunctionSpec> {
        FunctionSpec::by_name(&self.function)
            .map(|f| f.with_condition_limit(self.condition_limit))
            .map_err(|e| Error::Config(e.to_string()))
    }

    /// `matrix_file`, resolved against the data directory when relative.
    pub fn matrix_path(&self) -> Option<PathBuf> {
        let file = self.matrix_file.as_ref()?;
        if file.is_absolute() {
            return Some(file.clone());
        }
        Some(match env::var_os(DATA_DIR_VAR) {
            Some(dir) => PathBuf::from(dir).join(file),
            None => file.clone(),
        })
    }

    /// The first matrix of the sequence.
    pub fn build_operator(&self) -> Result<SparseMatrix> {
        match self.problem {
            ProblemKind::Laplacian => Ok(laplacian_2d(self.mesh)),
            ProblemKind::ConvectionDiffusion => Ok(convection_diffusion_2d(self.mesh, self.convection)),
            ProblemKind::GaugeLaplacian => Ok(gauge_laplacian_2d(self.mesh, self.mass, self.matrix_seed)),
            ProblemKind::MatrixMarket => {
                let path = self.matrix_path().expect("validated");
                let a = load_matrix_market(&path)?;
                if a.nrows() != a.ncols() {
                    return Err(Error::DimensionMismatch(format!(
                        "{} is {}x{}, not square",
                        path.display(),
                        a.nrows(),
                        a.ncols()
                    )));
                }
                Ok(a)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let cfg = ExperimentConfig::from_toml_with_overrides(
            "problem = \"laplacian\"\nmesh = 8\nengines = [\"arnoldi\", \"v2\"]\n",
            &["k=4".into(), "function=log".into(), "contour_center=[4.0, 0.5]".into(), "contour_radius=3.5".into()],
        )
        .unwrap();
        assert_eq!(cfg.mesh, 8);
        assert_eq!(cfg.k, 4);
        assert_eq!(cfg.function, "log");
        assert_eq!(cfg.engines, vec![Engine::Arnoldi, Engine::V2]);
        assert_eq!(cfg.contour_center.unwrap().value(), c64::new(4.0, 0.5));
        let round = ExperimentConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap();
        assert_eq!(round, cfg);
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "j = 0",
            "engines = []",
            "engines = [\"v4\"]",
            "unknown_key = 1",
            "function = \"cosh\"",
            "quadrature = \"stieltjes\"\nfunction = \"log\"",
            "problem = \"matrix_market\"",
            "contour_radius = 2.0",
        ] {
            assert!(
                matches!(ExperimentConfig::from_toml_str(text), Err(Error::Config(_))),
                "{text}"
            );
        }
    }
}
