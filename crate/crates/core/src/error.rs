use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// `e^(λ·h*)` would overflow a double.
    #[error("λ·h* = {exponent:.1} exceeds {limit}; the expected number of hysteresis intervals overflows (the interface effectively never sleeps)")]
    Overflow { exponent: f64, limit: f64 },

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    #[error("no wake delay up to {cap_s} s reaches sleeping fraction {target:.6}")]
    Unreachable { target: f64, cap_s: f64 },

    #[error("out of validity: {0}")]
    OutOfValidity(crate::analytic::Violation),

    #[error("arrival stream is empty")]
    EmptyStream,

    #[error("{path}:{line}: {reason}")]
    TraceParse { path: PathBuf, line: usize, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}

/// Rejects anything that is not a finite value inside `[lo, hi]`.
pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("{value} is outside [{lo}, {hi}]")))
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("{value} must be positive and finite")))
    }
}

pub(crate) fn check_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("{value} must be non-negative and finite")))
    }
}
