use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("need n >= p + 3 observations, got n = {n} with p = {p}")]
    TooFewObservations { n: usize, p: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("design matrix is rank deficient (column {column})")]
    RankDeficient { column: usize },

    #[error("response is constant; centered sum of squares is zero")]
    ConstantResponse,

    #[error("sufficient statistic {value} outside [0, 1] beyond round-off")]
    StatisticOutOfRange { value: f64 },

    #[error("direction has zero spread after centering")]
    DegenerateDirection,

    #[error("direction must have unit norm, got norm {norm}")]
    NonUnitDirection { norm: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid hyperparameters: {0}")]
    InvalidHyperparameters(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("invalid regime: {0}")]
    InvalidRegime(String),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    #[error("{failures} of {replicates} replicates failed at n = {n}")]
    TooManyFailures {
        n: usize,
        failures: usize,
        replicates: usize,
    },
}

impl Error {
    /// True for failures of the numerical machinery, as opposed to invalid
    /// inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NumericalFailure(_)
                | Error::StatisticOutOfRange { .. }
                | Error::TooManyFailures { .. }
        )
    }
}
