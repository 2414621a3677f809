use thiserror::Error;

/// Errors raised by the numeric kernels and the physics models built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("s = {s} lies outside the unit interval")]
    OutsideUnitInterval { s: f64 },

    #[error("derivative order {order} is not supported (maximum 3)")]
    UnsupportedOrder { order: usize },

    #[error(
        "quadrature did not converge: partial value {partial}, error estimate {error_estimate}"
    )]
    QuadratureNonConvergence { partial: f64, error_estimate: f64 },

    #[error("non-finite value encountered at t = {t}")]
    NonFinite { t: f64 },

    #[error("current variance must be positive, got {variance}")]
    NonPositiveVariance { variance: f64 },

    #[error("magnetic field not realizable: radicand {radicand} < 0 at s = {s} (eta = {eta})")]
    FieldNotRealizable { s: f64, eta: f64, radicand: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
