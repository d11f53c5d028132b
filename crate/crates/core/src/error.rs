use thiserror::Error;

/// Errors produced by the coefficient engines and the analysis built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("precision exhausted at {bits} bits (error bound {achieved:e}, target {target:e})")]
    PrecisionExhausted { bits: u64, achieved: f64, target: f64 },

    #[error("FFT grid of {grid} points too small for kmax = {kmax}: {reason}")]
    GridTooSmall { grid: usize, kmax: usize, reason: String },

    #[error("quadrature did not converge within {panels} panels")]
    NonConvergence { panels: usize },

    #[error("coefficient range too short: tail certificate {tail:e} exceeds 1% of {mass:e}")]
    InsufficientRange { tail: f64, mass: f64 },

    #[error("region boundaries are not ordered for n = {n}: {boundaries:?}")]
    Ordering { n: u64, boundaries: [i64; 6] },

    #[error("no stationary point for k/n = {alpha}")]
    NoStationaryPoint { alpha: f64 },

    #[error("degenerate regression: {0}")]
    Degenerate(String),

    #[error("engines disagree at n = {n}: exact {exact}, fft {fft}")]
    EngineMismatch { n: u64, exact: f64, fft: f64 },

    #[error("empty summation window for n = {n}")]
    EmptyWindow { n: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
