use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument sits within the configured guard distance of a pole.
    #[error("argument {arg} is within {guard} of the pole at {pole}")]
    NearPole { arg: f64, pole: f64, guard: f64 },

    /// The term cap was reached before the tail bound met the tolerance.
    #[error("term cap {cap} reached before tail bound {needed} met tolerance {tol}")]
    CapExceeded { cap: u64, needed: u64, tol: f64 },

    /// A retained product factor (1 + x/m) is not positive.
    #[error("factor (1 + {x}/{m}) is not positive")]
    NonPositiveFactor { x: f64, m: u64 },

    /// Argument outside the documented domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A term left the representable range.
    #[error("numerical overflow at index {0}")]
    NumericalOverflow(u64),

    /// The requested tolerance cannot be met within the precision contract.
    #[error("tolerance {0} unreachable")]
    TolUnreachable(f64),

    /// Invalid configuration value.
    #[error("invalid config: {0}")]
    InvalidConfig(String),
}
