use thiserror::Error;

/// Errors raised by the series engine, the symbol constructions and the
/// numerical checks built on them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("constant term {magnitude:e} is below the non-zero threshold {threshold:e}")]
    NearZeroConstantTerm { magnitude: f64, threshold: f64 },

    #[error("constant term argument {arg} lies within {margin} of the principal branch cut")]
    BranchCutProximity { arg: f64, margin: f64 },

    #[error("non-finite sample at angle {angle} on the circle of radius {radius}")]
    SampleSingularity { angle: f64, radius: f64 },

    #[error("conformal map construction failed: {0}")]
    MapConstructionFailure(String),

    #[error("quadrature did not stabilize: {0}")]
    QuadratureDivergence(String),

    #[error("boundary and formal routes disagree: max difference {max_diff:e} at index {index} (tolerance {tol:e})")]
    RouteDisagreement {
        max_diff: f64,
        index: usize,
        tol: f64,
    },

    #[error("log-singularity fit unstable: slopes {slopes:?}")]
    FitUnstable { slopes: Vec<f64> },

    #[error("Dirichlet index base^k overflows u64 beyond k = {cutoff}")]
    IndexOverflow { cutoff: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

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

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
