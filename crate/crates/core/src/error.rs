use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole of the gamma function at x = {x}")]
    Pole { x: f64 },

    #[error("unsupported Bessel order {0}; only 0 and 1 are implemented")]
    UnsupportedOrder(i32),

    #[error("grid of {m} points is too coarse; at least {required} are needed")]
    Resolution { m: usize, required: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("cannot aggregate samples: {0}")]
    Aggregation(String),

    #[error("moment k = {k} diverges at beta = {beta} (k * beta^2 >= 1)")]
    Divergence { k: u32, beta: f64 },

    #[error("size {n} exceeds the limit {limit}")]
    Size { n: usize, limit: usize },

    #[error("precision error: {0}")]
    Precision(String),

    #[error("normalization error: {0}")]
    Normalization(String),

    #[error("experiment design error: {0}")]
    Design(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
