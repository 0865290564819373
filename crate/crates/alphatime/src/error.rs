use thiserror::Error;

/// Crate-wide error type.
///
/// Errors fall into two families: validation failures (bad parameters,
/// malformed config, preconditions) and estimator-reliability failures
/// (an estimate exists but cannot be trusted at the requested budget).
/// The CLI maps the first family to exit code 2 and the second to 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config: {0}")]
    Config(String),

    #[error("time {t} lies beyond the path horizon {horizon}")]
    BeyondHorizon { t: f64, horizon: f64 },

    #[error("eigensolve did not converge within {0} iterations")]
    EigenNonConvergence(usize),

    #[error("exit-time window miscalibrated: {0}")]
    WindowMiscalibration(String),

    #[error("occupation grid under-coverage: {0}")]
    GridUnderCoverage(String),

    #[error("insufficient tail mass: {0}")]
    InsufficientTailMass(String),

    #[error("effective sample size collapsed: {0}")]
    EffectiveSampleCollapse(String),

    #[error("unreliable rare-event estimate: {0}")]
    UnreliableEstimate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI should use for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InsufficientTailMass(_)
            | Error::EffectiveSampleCollapse(_)
            | Error::UnreliableEstimate(_) => 3,
            _ => 2,
        }
    }
}
