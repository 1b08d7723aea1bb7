use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree distribution is empty")]
    EmptyDistribution,
    #[error("probabilities sum to {sum}, not 1 (tolerance 1e-9)")]
    SumNotOne { sum: f64 },
    #[error("negative probability {prob} at degree {degree}")]
    NegativeProbability { degree: u32, prob: f64 },
    #[error("degree {0} listed more than once")]
    DuplicateDegree(u32),
    #[error("non-finite probability at degree {0}")]
    NonFinite(u32),
    #[error("power-law tail with exponent {alpha} <= 2 has infinite mean")]
    DivergentTail { alpha: f64 },
    #[error("invalid tail specification: {0}")]
    InvalidTail(String),
    #[error("distribution has zero mean")]
    ZeroMean,
    #[error("argument {0} outside [0, 1]")]
    DomainError(f64),
    #[error(
        "fixed-point solver did not converge (residual {residual:e} after {iterations} iterations)"
    )]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("class mean {mu} is smaller than the distribution mean {mean}")]
    MeanMismatch { mu: f64, mean: f64 },
    #[error("p2 = 1: the 2-regular case is excluded")]
    DegenerateTwoRegular,
    #[error("invalid prefix: {0}")]
    InvalidPrefix(String),
    #[error("no mass beyond the prefix (p_>L = 0)")]
    EmptyTail,
    #[error("kappa = {kappa} < L + 1 = {min}: no distribution with this prefix and mean")]
    InfeasibleMean { kappa: f64, min: u32 },
    #[error("m = {m} must exceed both kappa = {kappa} and L + 1")]
    BadM { m: u32, kappa: f64 },
    #[error("all mass lies on one side of floor(kappa) = {0}")]
    DegenerateSplit(u32),
    #[error("grid step {0} does not divide 1")]
    BadStep(f64),
    #[error("prefix length {0} outside 1..=8")]
    BadLength(usize),
    #[error("control value {control} gives a probability outside [0, 1]")]
    InfeasibleControl { control: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("odd half-edge total {0}")]
    OddSum(u64),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error("i/o: {0}")]
    Io(String),
}

/// `serde_json::Error` is neither `Clone` nor `PartialEq`; keep its message.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("json: {0}")]
pub struct JsonError(pub String);

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(JsonError(e.to_string()))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Errors caused by invalid input, as opposed to numerical failure.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::NoConvergence { .. } | Error::Io(_))
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyDistribution => "EmptyDistribution",
            Error::SumNotOne { .. } => "SumNotOne",
            Error::NegativeProbability { .. } => "NegativeProbability",
            Error::DuplicateDegree(_) => "DuplicateDegree",
            Error::NonFinite(_) => "NonFinite",
            Error::DivergentTail { .. } => "DivergentTail",
            Error::InvalidTail(_) => "InvalidTail",
            Error::ZeroMean => "ZeroMean",
            Error::DomainError(_) => "DomainError",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::MeanMismatch { .. } => "MeanMismatch",
            Error::DegenerateTwoRegular => "DegenerateTwoRegular",
            Error::InvalidPrefix(_) => "InvalidPrefix",
            Error::EmptyTail => "EmptyTail",
            Error::InfeasibleMean { .. } => "InfeasibleMean",
            Error::BadM { .. } => "BadM",
            Error::DegenerateSplit(_) => "DegenerateSplit",
            Error::BadStep(_) => "BadStep",
            Error::BadLength(_) => "BadLength",
            Error::InfeasibleControl { .. } => "InfeasibleControl",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::OddSum(_) => "OddSum",
            Error::Parse { .. } => "Parse",
            Error::Json(_) => "Json",
            Error::Io(_) => "Io",
        }
    }
}
