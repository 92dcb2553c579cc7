use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid mode (m={m}, n={n}) for dimension {d}: {reason}")]
    InvalidMode { d: u32, m: u32, n: u32, reason: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("term budget of {cap} exceeded before reaching tolerance {tol:e} (tail bound {tail:e})")]
    BudgetExceeded { cap: u64, tol: f64, tail: f64 },

    #[error("requested tolerance {tol:e} is below the rounding floor {floor:e}")]
    ToleranceBelowRoundoff { tol: f64, floor: f64 },

    #[error("eigenfunction is not square integrable: {0}")]
    NotIntegrable(String),

    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e})")]
    QuadratureFailed { tol: f64, estimate: f64 },

    #[error("ill-conditioned fit: condition number {0:e}")]
    IllConditioned(f64),

    #[error("numeric overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
