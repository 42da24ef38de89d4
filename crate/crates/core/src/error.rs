use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed expression text. `position` is a byte offset into the input.
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    /// Well-formed input that falls outside the entire-function node set
    /// (non-integer exponent, variable divisor, ...).
    #[error("domain error at position {position}: {message}")]
    ExprDomain { position: usize, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("expression is not a polynomial (contains exp)")]
    NotPolynomial,

    #[error("analytic part is not transcendental (contains no exp)")]
    NotTranscendental,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("grids differ in window or resolution")]
    GridMismatch,

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
