use thiserror::Error;

/// Failure modes shared by every layer of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular matrix: pivot {pivot:.3e} below threshold {threshold:.3e}")]
    SingularMatrix { pivot: f64, threshold: f64 },

    #[error("rank deficient input: {0}")]
    RankDeficient(String),

    #[error("no convergence in {0}")]
    NoConvergence(&'static str),

    #[error("singular pencil: smallest singular value {smallest:.3e} of the right-hand matrix")]
    SingularPencil { smallest: f64 },

    #[error("right-hand side has zero norm")]
    ZeroRhs,

    #[error("shift {shift} is (numerically) an eigenvalue of the projected matrix")]
    SingularShift { shift: String },

    #[error("projected augmentation matrix is singular at node {node}")]
    SingularProjector { node: usize },

    #[error("augmented system is singular at node {node}")]
    SingularSystem { node: usize },

    #[error("function {function} undefined at {at}")]
    FunctionUndefined { function: String, at: String },

    #[error("eigenbasis condition estimate {estimate:.3e} exceeds {limit:.1e}")]
    IllConditionedEigenbasis { estimate: f64, limit: f64 },

    #[error("parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },

    #[error("unsupported Matrix Market format: {0}")]
    UnsupportedFormat(String),

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short variant name, used in report status fields.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SingularMatrix { .. } => "SingularMatrix",
            Error::RankDeficient(_) => "RankDeficient",
            Error::NoConvergence(_) => "NoConvergence",
            Error::SingularPencil { .. } => "SingularPencil",
            Error::ZeroRhs => "ZeroRhs",
            Error::SingularShift { .. } => "SingularShift",
            Error::SingularProjector { .. } => "SingularProjector",
            Error::SingularSystem { .. } => "SingularSystem",
            Error::FunctionUndefined { .. } => "FunctionUndefined",
            Error::IllConditionedEigenbasis { .. } => "IllConditionedEigenbasis",
            Error::ParseError { .. } => "ParseError",
            Error::UnsupportedFormat(_) => "UnsupportedFormat",
            Error::UnknownFunction(_) => "UnknownFunction",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Config(_) => "Config",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
