use thiserror::Error;

/// Errors raised by the exact and numeric engines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero polynomial has no content decomposition")]
    ZeroContent,
    #[error("{0}: zero polynomial not allowed")]
    ZeroPolynomial(&'static str),
    #[error("composition degree {bound} is below the polynomial degree {degree}")]
    DegreeBound { bound: usize, degree: usize },
    #[error("map must be non-constant")]
    ConstantMap,
    #[error("denominator of a rational map must be nonzero")]
    ZeroDenominator,
    #[error("growth check requires deg A > deg B (got deg A = {n}, deg B = {m})")]
    GrowthHypothesis { n: usize, m: usize },
    #[error("height bound requires deg A > deg B (got deg A = {n}, deg B = {m})")]
    ContractionHypothesis { n: usize, m: usize },
    #[error("identity F∘A = F∘B fails: {0}")]
    IdentityFails(String),
    #[error("empty {0}")]
    Empty(&'static str),
    #[error("negative height bound {0}")]
    NegativeBound(f64),
    #[error("non-finite input: {0}")]
    NonFinite(String),
    #[error("root finder did not converge for {context} at {precision} bits")]
    NoConvergence { context: String, precision: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
