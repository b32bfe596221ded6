use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("need at least {need} rows for dimension {d}, got {n}")]
    TooFewRows { n: usize, d: usize, need: usize },

    #[error("sample covariance is singular (leading minor {order} = {minor:e})")]
    SingularCovariance { order: usize, minor: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("unsupported dimension {0}; expected 2 or 3")]
    UnsupportedDimension(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("probability {p} does not exceed the point mass {atom} at zero")]
    InfeasibleQuantile { p: f64, atom: f64 },

    #[error("constrained optimisation failed: {0}")]
    OptimizerFailure(String),

    #[error("degenerate split: {0}")]
    DegenerateSplit(String),

    #[error("no positive definite moment completion for ordering {0}")]
    InfeasibleMoment(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("column length mismatch: {0}")]
    LengthMismatch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("network error: {0}")]
    Fetch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Parse and configuration problems map to exit code 2, numerical
    /// failures to 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::LengthMismatch(_)
            | Error::Config(_)
            | Error::Io(_)
            | Error::Fetch(_)
            | Error::UnsupportedDimension(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
