use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("structure matrices do not commute")]
    NonCommuting,
    #[error("det Π₁(X, Y) = 0: refactorization undefined at this point")]
    SingularPi1,
    #[error("triple-product recovery matrix is singular")]
    SingularRecovery,
    #[error("prescribed spectra are inconsistent with the triple product")]
    InconsistentProduct,
    #[error("oracle found no root after {starts} starts (seed {seed})")]
    OracleInconclusive { starts: usize, seed: u64 },
    #[error("{map}: undefined at {point}")]
    Domain { map: String, point: String },
    #[error("negative radicand {0}")]
    NegativeRadicand(f64),
    #[error("ε must be nonzero")]
    ZeroEpsilon,
    #[error("leaf extraction mismatch: {0}")]
    LeafExtractionMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid lattice configuration: {0}")]
    Config(String),
    #[error("site {site}, level {level}: {source}")]
    Site { site: usize, level: usize, source: Box<Error> },
    #[error("{factor}: {source}")]
    Factor { factor: String, source: Box<Error> },
    #[error("step {step}: {source}")]
    Step { step: usize, source: Box<Error> },
    #[error("rational size {bits} bits exceeds the limit of {limit} at step {step}")]
    BitLimit { step: usize, bits: u64, limit: u64 },
}

impl Error {
    pub fn domain(map: impl Into<String>, point: impl Into<String>) -> Self {
        Error::Domain { map: map.into(), point: point.into() }
    }

    /// Innermost error, looking through site and step context.
    pub fn root(&self) -> &Error {
        match self {
            Error::Site { source, .. } | Error::Step { source, .. } | Error::Factor { source, .. } => source.root(),
            e => e,
        }
    }
}
