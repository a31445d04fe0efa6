use thiserror::Error;

/// Errors raised while parsing specs or building and evaluating constructions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),

    #[error("invalid rational {text:?}: {reason}")]
    Rational { text: String, reason: &'static str },

    #[error("probabilities sum to {0}, expected exactly 1")]
    MassNotOne(String),

    #[error("0 is not in the support closure of the distribution")]
    MissingZero,

    #[error("atom values must be strictly increasing and nonnegative (at position {0})")]
    AtomOrder(usize),

    #[error("atom probability at position {0} must lie in (0, 1]")]
    AtomProbability(usize),

    #[error("density violates its declared bounds: {0}")]
    DensityBound(String),

    #[error("density knots are invalid: {0}")]
    Knots(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("atom {value} lies outside the interval [{lo}, {hi}]")]
    AtomOutsideInterval { value: String, lo: String, hi: String },

    #[error("selection probability {0} is not in (0, 1)")]
    SelectionProbability(String),

    #[error("symbol {symbol} out of range for alphabet of size {size}")]
    SymbolOutOfRange { symbol: u64, size: u64 },

    #[error("cannot certify a truncation with tail mass at most {0}")]
    Truncation(String),

    #[error("quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e})")]
    Quadrature { tolerance: f64, estimate: f64 },

    #[error("hypergeometric series did not converge within {0} terms")]
    SeriesTermCap(usize),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
