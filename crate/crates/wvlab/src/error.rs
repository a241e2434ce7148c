use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Every stored coefficient is zero; growth functionals are undefined.
    #[error("zero series: every stored coefficient is zero")]
    ZeroSeries,

    /// Construction-time validation of coefficient data failed.
    #[error("invalid series: {0}")]
    InvalidSeries(String),

    /// The stored prefix never exhibits a full window of terms below the
    /// truncation threshold at this radius.
    #[error(
        "truncation insufficient at r = {radius}: {stored} stored coefficients; \
         retry with N >= {suggested}"
    )]
    InsufficientTruncation {
        radius: f64,
        stored: usize,
        suggested: usize,
    },

    /// A parameter lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed interval data (reversed endpoints, NaN, out of range).
    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    /// Too few usable records in a regression window.
    #[error("regression window has {found} usable records, need at least {need}")]
    DegenerateRegression { need: usize, found: usize },

    /// The weighted shift fails the chaos criterion on the requested space.
    #[error("weights are not chaotic on the requested space (verdict: {verdict})")]
    NotChaotic { verdict: String },

    /// An orbit coefficient index runs past the stored multiplier prefix.
    #[error(
        "orbit index n + k = {index} exceeds stored length {stored}; \
         rebuild the random function with N >= {suggested}"
    )]
    OrbitIndex {
        index: usize,
        stored: usize,
        suggested: usize,
    },

    /// The orbit tail beyond the stored prefix cannot be certified small.
    #[error(
        "orbit tail at rho = {rho} bounded by {bound:.3e}, need < {need:.3e}; \
         rebuild the random function with N >= {suggested}"
    )]
    TruncationMargin {
        rho: f64,
        bound: f64,
        need: f64,
        suggested: usize,
    },

    /// Configuration validation failure; `path` is the offending field.
    #[error("config field `{path}`: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
