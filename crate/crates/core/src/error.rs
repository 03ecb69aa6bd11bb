use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside the domain where the formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Shot noise diverges when there is no light in the cavity.
    #[error("no light in the cavity: shot noise is unbounded")]
    NoLight,

    #[error("unstable: {0}")]
    Unstable(String),

    #[error("design constraint `{constraint}` violated: {detail}")]
    Design {
        constraint: &'static str,
        detail: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("simulation error: {0}")]
    Simulation(String),

    /// Two routes to the same quantity disagree; always a bug in this crate.
    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("writing output failed: {0}")]
    Output(#[from] std::io::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("must be finite and > 0, got {value}")))
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("must be finite and >= 0, got {value}")))
    }
}

pub(crate) fn require_frequency(omega: f64) -> Result<f64> {
    if omega.is_finite() && omega > 0.0 {
        Ok(omega)
    } else {
        Err(Error::Domain(format!(
            "Fourier frequency must be > 0 rad/s, got {omega}"
        )))
    }
}
