//! Multi-stream transmission capacity and its feedback feasibility region.

use serde::Serialize;

use crate::analytics::outage::interference_constant;
use crate::error::{Error, Result};
use crate::params::{quantization_error_bound, FeedbackBits, NetworkParams};

/// Transmission-capacity result at a given outage constraint.
#[derive(Debug, Clone, Serialize)]
pub struct TcResult {
    /// Maximum contention density lambda_epsilon (clamped to 0).
    pub max_density: f64,
    /// Capacity C = K lambda_epsilon (1 - epsilon), streams per unit area.
    pub capacity: f64,
    /// False when the bracket is non-positive (self-interference dominates).
    pub feasible: bool,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonOutOfRange { epsilon });
    }
    Ok(())
}

/// Maximum multi-stream transmission capacity under per-stream outage
/// constraint `epsilon`:
///
/// `C = K(1-eps)/(I_K zeta_max^(2/alpha)) [ln(1/(1-eps)) - sigma^2 zeta_max / rho - (K-1) ln(1+beta delta)]`.
///
/// A non-positive bracket is clamped to zero with `feasible = false`: residual
/// self-interference can make any positive contention density unattainable.
pub fn transmission_capacity(params: &NetworkParams, epsilon: f64) -> Result<TcResult> {
    check_epsilon(epsilon)?;
    let derived = params.validate()?;
    let k = params.k_streams as f64;
    let i_k = interference_constant(params.k_streams, params.alpha)?;
    let bracket = (1.0 / (1.0 - epsilon)).ln()
        - params.noise * derived.zeta_max / params.rho()
        - (k - 1.0) * (1.0 + derived.beta_max * derived.delta).ln();
    let feasible = bracket > 0.0;
    let scale = i_k * derived.zeta_max.powf(2.0 / params.alpha);
    let max_density = if feasible { bracket / scale } else { 0.0 };
    Ok(TcResult {
        max_density,
        capacity: k * (1.0 - epsilon) * max_density,
        feasible,
    })
}

/// Capacity deficit caused by quantized feedback,
/// `Delta C = C_CSI - C = K(K-1)(1-eps) ln(1+beta delta) / (I_K zeta_max^(2/alpha))`,
/// evaluated on the unclamped capacity expressions.
pub fn tc_gap(params: &NetworkParams, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let derived = params.validate()?;
    let k = params.k_streams as f64;
    let i_k = interference_constant(params.k_streams, params.alpha)?;
    Ok(
        k * (k - 1.0) * (1.0 - epsilon) * (1.0 + derived.beta_max * derived.delta).ln()
            / (i_k * derived.zeta_max.powf(2.0 / params.alpha)),
    )
}

/// Smallest feedback budget with positive transmission capacity.
///
/// Returns 0 when the capacity is positive for every budget (K = 1, or the
/// target is loose enough that even one-bit-free quantization clears it).
/// Errors with `InfeasibleRegime` when `(1-eps) e^(sigma^2 zeta_max / rho) >= 1`,
/// in which case no budget helps.
pub fn tc_feasible_bits(params: &NetworkParams, epsilon: f64) -> Result<u32> {
    check_epsilon(epsilon)?;
    let derived = params.validate()?;
    let k = params.k_streams;
    let noise_exp = params.noise * derived.zeta_max / params.rho();
    let headroom = -(1.0 - epsilon).ln() - noise_exp;
    if headroom <= 0.0 {
        return Err(Error::InfeasibleRegime(format!(
            "(1-eps) e^(sigma^2 zeta/rho) = {:.6} >= 1: no feedback budget yields positive capacity",
            (1.0 - epsilon) * noise_exp.exp()
        )));
    }
    if k == 1 {
        return Ok(0);
    }

    let m = params.m_antennas;
    let bracket = |bits: u32| {
        let delta = quantization_error_bound(m, f64::from(bits));
        headroom - (k as f64 - 1.0) * (1.0 + derived.beta_max * delta).ln()
    };

    // closed-form threshold, then integer adjustment against the bracket
    let x = ((-noise_exp).exp() / (1.0 - epsilon)).powf(1.0 / (k as f64 - 1.0)) - 1.0;
    let threshold = (m as f64 - 1.0) * (derived.beta_max / x).log2();
    let mut bits = if threshold < 0.0 {
        0
    } else {
        threshold.floor() as u32 + 1
    };
    while bracket(bits) <= 0.0 {
        bits += 1;
    }
    while bits > 0 && bracket(bits - 1) > 0.0 {
        bits -= 1;
    }
    Ok(bits)
}

/// Convenience: capacity of the same cluster with perfect CSI (B infinite).
pub fn transmission_capacity_perfect_csi(
    params: &NetworkParams,
    epsilon: f64,
) -> Result<TcResult> {
    let mut p = params.clone();
    p.bits = FeedbackBits::Infinite;
    transmission_capacity(&p, epsilon)
}
