use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("pole of the gamma function at {0}")]
    Pole(f64),
    #[error("quadrature failure: achieved error estimate {achieved:.3e} (requested {requested:.3e})")]
    Quadrature { achieved: f64, requested: f64 },
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("pfaffian: {0}")]
    Pfaffian(String),
    #[error("ill-conditioned gram matrix: {0}")]
    IllConditioned(String),
    #[error("non-positive skew-norm r_{k} = {value:e}")]
    NonPositiveSkewNorm { k: usize, value: f64 },
    #[error("perturbation point is a zero of q_{n}")]
    ZeroOfSop { n: usize },
    #[error("perturbation point gives negative skew-norm ratio at k = {k} (q_{{2k+2}}(m)/q_{{2k}}(m) = {ratio:e})")]
    NegativeRatio { k: usize, ratio: f64 },
    #[error("inexact polynomial division: remainder {remainder:e} versus numerator norm {norm:e}")]
    InexactDivision { remainder: f64, norm: f64 },
    #[error("gauge mismatch: {0}")]
    Gauge(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("eigen-solver failed to converge")]
    EigenSolver,
    #[error("sampler: {0}")]
    Sampler(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by invalid user input rather than numerical breakdown.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_) | Error::Domain(_) | Error::Unsupported(_) | Error::Parse(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
