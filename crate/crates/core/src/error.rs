//! Error types shared by the analytics, simulation, and planning engines.

use thiserror::Error;

/// A single violated invariant found while validating [`crate::NetworkParams`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("path-loss exponent alpha = {0} must be > 2 (interference integrals diverge)")]
    AlphaOutOfRange(f64),
    #[error("k_streams = {k} exceeds m_antennas = {m}")]
    StreamsExceedAntennas { k: usize, m: usize },
    #[error("user {index} has non-positive distance {value}")]
    NonPositiveDistance { index: usize, value: f64 },
    #[error("user {index} has non-positive SINR target {value}")]
    NonPositiveBeta { index: usize, value: f64 },
    #[error("transmitter density lambda = {0} must be >= 0")]
    NegativeDensity(f64),
    #[error("k_streams must be >= 1")]
    ZeroStreams,
    #[error("m_antennas must be >= 1")]
    ZeroAntennas,
    #[error("per-user list `{name}` has length {got}, expected k_streams = {want}")]
    UserListLength {
        name: &'static str,
        got: usize,
        want: usize,
    },
    #[error("total transmit power {0} must be > 0")]
    NonPositivePower(f64),
    #[error("noise variance {0} must be >= 0")]
    NegativeNoise(f64),
}

/// Crate-wide error type. Validation failures carry every violated invariant.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {}", format_violations(.0))]
    InvalidParams(Vec<Violation>),
    #[error("alpha = {alpha} out of range (need alpha > 2)")]
    AlphaOutOfRange { alpha: f64 },
    #[error("{name} = {value} must be positive")]
    NonPositiveArgument { name: &'static str, value: f64 },
    #[error("hypergeometric parameter c = {c} is a non-positive integer (pole)")]
    PoleAtC { c: f64 },
    #[error("argument z = {z} outside the supported domain (need z < 1)")]
    DomainNotSupported { z: f64 },
    #[error("quadrature did not converge: error estimate {achieved:e} above tolerance {required:e}")]
    NoConvergence { achieved: f64, required: f64 },
    #[error("outage constraint epsilon = {epsilon} must lie in (0, 1)")]
    EpsilonOutOfRange { epsilon: f64 },
    #[error("infeasible regime: {0}")]
    InfeasibleRegime(String),
    #[error("operation requires zero noise, got sigma^2 = {noise}")]
    NoiseNotZero { noise: f64 },
    #[error("(M-1)*delta = 1: closed form has a 0/0 prefactor; use the quadrature path")]
    DegenerateScale,
    #[error("ergodic rate diverges (no interference, no noise, perfect CSI)")]
    DivergentRate,
    #[error("offset {value} outside the valid window [{lo}, {hi}]")]
    OffsetOutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("single-stream cluster (K = 1) has no quantization-induced throughput gap")]
    SingleStream,
    #[error("codebook of 2^{bits} entries exceeds the B <= {max} guard")]
    CodebookTooLarge { bits: u32, max: u32 },
    #[error("matrix is singular or condition number beyond 1e12")]
    SingularMatrix,
    #[error("invalid simulation config: {0}")]
    InvalidSimConfig(String),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
