use thiserror::Error;

/// Errors raised by the numeric kernels and the channel model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The result would overflow the scalar type.
    #[error("range error: {0}")]
    Range(String),

    /// Argument sits on a pole of the function.
    #[error("pole at {0}")]
    Pole(f64),

    /// Parameter combination the formulas cannot be evaluated for.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// Root finding found no sign change on the searched bracket.
    #[error("no root in [{lo}, {hi}]: residual {f_lo} at lo, {f_hi} at hi")]
    NoRoot {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// An iterative method or quadrature failed to converge.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// The tabulated envelope law failed a model sanity check.
    #[error("model error: {reason} (raw normalization {normalization})")]
    Model { reason: String, normalization: f64 },

    /// No valid operating point exists (e.g. empty TIFR region).
    #[error("no capacity: {0}")]
    NoCapacity(String),
}

impl Error {
    /// Whether the error stems from invalid input rather than a numeric failure.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Pole(_) | Error::Configuration(_) | Error::Range(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
