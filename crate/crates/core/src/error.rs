use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("regularization epsilon must be strictly positive, got {0}")]
    NonPositiveEpsilon(f64),

    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("missing required parameter `{0}`")]
    MissingParameter(&'static str),

    #[error("degenerate medium: g2d = 0 gives zero sound speed")]
    DegenerateMedium,

    #[error("quadrature needs at least {min} nodes, got {got}")]
    TooFewNodes { got: usize, min: usize },

    #[error("t_cutoff = {t_cutoff} is below the minimum {min} (50 * max(delta, 1))")]
    CutoffTooSmall { t_cutoff: f64, min: f64 },

    #[error("no de-excitation signal at nu = {0} (SNR is defined for nu < 0 only)")]
    NoDeexcitationSignal(f64),

    #[error("quadrature did not converge: error estimate {error:e} after {panels} panels")]
    QuadratureNotConverged { error: f64, panels: usize },

    #[error("spectral matrix at bin {bin} is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { bin: usize, min_eigenvalue: f64 },

    #[error("{name} must be a power of two, got {value}")]
    NotPowerOfTwo { name: &'static str, value: usize },

    #[error("segment length {segment_len} exceeds record length {n_samples}")]
    SegmentTooLong { segment_len: usize, n_samples: usize },

    #[error("record lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    require_finite(name, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be strictly positive",
        })
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    require_finite(name, value)?;
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be non-negative",
        })
    }
}
