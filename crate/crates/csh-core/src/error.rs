//! Error type shared by the simulation and estimate-checking halves.

use thiserror::Error;

/// Errors produced by grid construction, field operations and the dynamics.
#[derive(Debug, Error)]
pub enum CoreError {
    /// Grid construction rejected the requested parameters.
    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },

    /// Two fields that must live on the same grid do not.
    #[error("grid mismatch in {context}: {left_n}×{left_n} (L={left_len}) vs {right_n}×{right_n} (L={right_len})")]
    GridMismatch {
        context: &'static str,
        left_n: usize,
        left_len: f64,
        right_n: usize,
        right_len: f64,
    },

    /// A Fourier multiplier evaluated to a non-finite value at a grid mode.
    #[error("multiplier '{name}' is not finite at mode ({m1}, {m2})")]
    NonFiniteMultiplier { name: String, m1: i64, m2: i64 },

    /// Attempt to write a coefficient on the (identically zero) Nyquist lines.
    #[error("mode ({m1}, {m2}) lies on the Nyquist lines, which are pinned to zero")]
    NyquistWrite { m1: i64, m2: i64 },

    /// Attempt to address a mode outside the retained band.
    #[error("mode ({m1}, {m2}) is outside the retained band of an n={n} grid")]
    OutOfBand { m1: i64, m2: i64, n: usize },

    /// Dealiased products support 2..=5 factors only.
    #[error("dealiased product of {arity} factors is unsupported (need 2..=5)")]
    ProductArity { arity: usize },

    /// Polynomial potential of a degree the exact product machinery cannot cover.
    #[error("potential degree {degree} exceeds the supported maximum {max}")]
    PotentialDegree { degree: usize, max: usize },

    /// A state or tendency stopped being finite during time stepping.
    #[error("non-finite field values encountered at t = {time}")]
    NonFiniteState { time: f64 },

    /// A routine needs more samples than were supplied.
    #[error("{what}: got {got} samples, need at least {need}")]
    InsufficientSamples {
        what: &'static str,
        got: usize,
        need: usize,
    },

    /// A scalar parameter is out of its admissible range.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

/// Result alias for fallible core operations.
pub type CoreResult<T> = Result<T, CoreError>;

impl CoreError {
    /// Helper for constructing a grid-mismatch error from two grids.
    pub(crate) fn mismatch(context: &'static str, left: (usize, f64), right: (usize, f64)) -> Self {
        CoreError::GridMismatch {
            context,
            left_n: left.0,
            left_len: left.1,
            right_n: right.0,
            right_len: right.1,
        }
    }
}
