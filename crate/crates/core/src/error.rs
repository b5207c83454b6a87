use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("outside domain: {0}")]
    Domain(String),

    #[error("polynomial degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("no double root in [{lo}, {hi}] (best residual {residual:e})")]
    NoDoubleRoot { lo: f64, hi: f64, residual: f64 },

    #[error("finite-difference stencil leaves the domain of the function")]
    StencilOutsideDomain,

    #[error("pencil is degenerate or unresolved at the sampled combinations")]
    DegenerateOrUnresolved,

    #[error("cloud is empty")]
    EmptyCloud,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed record: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
