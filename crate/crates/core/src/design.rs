//! Planners built on the analytics engine: stream-count and antenna-count
//! optimizers plus feedback-bit budgeting for bounded performance offsets.
//!
//! Planners evaluate the worst-case symmetric profile of the input cluster
//! (largest SINR target, largest link distance). Integer enumeration is the
//! authoritative optimizer; the large-K closed forms are the cheap
//! approximations the adaptive schemes use.

use serde::Serialize;

use crate::analytics::{
    interference_constant, network_throughput_lb, tc_gap, throughput_ratio_gap,
    transmission_capacity,
};
use crate::error::{Error, Result};
use crate::params::{linear_to_db, NetworkParams};
use crate::specfun::gamma_fn;

/// How a plan's optimum was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PlanMethod {
    /// Exact integer search over K = 1..M.
    Enumeration,
    /// Closed-form stationary point under the large-K interference asymptote.
    LargeKApprox,
}

/// Stream-count plan: the chosen K and the enumerated objective curve.
#[derive(Debug, Clone, Serialize)]
pub struct StreamPlan {
    /// Optimal stream count in [1, M].
    pub k_star: usize,
    /// Objective value at each K in {1..M} (index K-1), from enumeration.
    pub objective_curve: Vec<f64>,
    pub method: PlanMethod,
}

/// Feedback-bit plan and the offset target it satisfies.
#[derive(Debug, Clone, Serialize)]
pub struct FeedbackPlan {
    pub bits_required: u32,
    pub offset_kind: OffsetKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum OffsetKind {
    /// Transmission-capacity gap `Delta C <= ln(factor)`.
    TcGap { factor: f64 },
    /// Throughput ratio `QT <= ratio`.
    ThroughputRatio { ratio: f64 },
    /// The `(M-1) beta_dB / 3` rule (ratio 2^(K-1)).
    ThreeDbRule,
}

/// Symmetric worst-case profile with `k` streams from an arbitrary base.
fn profile_with_streams(base: &NetworkParams, k: usize) -> Result<NetworkParams> {
    let derived = base.validate()?;
    let mut p = base.clone();
    p.k_streams = k;
    p.beta_per_user = vec![derived.beta_max; k];
    p.dist_per_user = vec![derived.d_max; k];
    Ok(p)
}

fn argmax_low_tie(curve: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in curve.iter().enumerate() {
        if v > curve[best] {
            best = i;
        }
    }
    best
}

/// Positive root of `c1 x^alpha + c2 x^2 = 1` (strictly increasing from 0).
fn increasing_poly_root(c1: f64, c2: f64, alpha: f64) -> f64 {
    if c1 <= 0.0 && c2 <= 0.0 {
        return f64::INFINITY;
    }
    let h = |x: f64| c1 * x.powf(alpha) + c2 * x * x - 1.0;
    let mut hi = 1.0f64;
    let mut guard = 0;
    while h(hi) < 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return f64::INFINITY;
        }
    }
    let mut lo = 0.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn clamp_k(k: f64, m: usize) -> usize {
    if !k.is_finite() {
        return m;
    }
    (k.ceil().max(1.0) as usize).min(m)
}

/// Stream count maximizing the network throughput lower bound.
///
/// Enumeration evaluates the bound at K = 1..M with the quantization error
/// held at the M-antenna value (delta depends on M and B, not K). The
/// approximation solves `c1 x^alpha + c2 x^2 = 1` with
/// `c1 = sigma^2 zeta_max / P + ln(1 + beta delta)` and
/// `c2 = lambda pi Gamma(1 - 2/alpha) zeta_max^(2/alpha)`, and returns
/// `K* = ceil(x^alpha)` clamped to [1, M].
pub fn optimal_streams_throughput(
    params: &NetworkParams,
    method: PlanMethod,
) -> Result<StreamPlan> {
    let derived = params.validate()?;
    let m = params.m_antennas;
    let mut curve = Vec::with_capacity(m);
    for k in 1..=m {
        curve.push(network_throughput_lb(&profile_with_streams(params, k)?)?);
    }
    let k_star = match method {
        PlanMethod::Enumeration => argmax_low_tie(&curve) + 1,
        PlanMethod::LargeKApprox => {
            let c1 = params.noise * derived.zeta_max / params.power
                + (1.0 + derived.beta_max * derived.delta).ln();
            let c2 = params.lambda
                * std::f64::consts::PI
                * gamma_fn(1.0 - 2.0 / params.alpha)?
                * derived.zeta_max.powf(2.0 / params.alpha);
            let x = increasing_poly_root(c1, c2, params.alpha);
            clamp_k(x.powf(params.alpha), m)
        }
    };
    Ok(StreamPlan {
        k_star,
        objective_curve: curve,
        method,
    })
}

/// Stream count maximizing the multi-stream transmission capacity.
///
/// The large-K stationary point is
/// `K* = ceil((1 - 2/alpha) C4 / ((2 - 2/alpha) C3))` with
/// `C3 = sigma^2 zeta_max / P + ln(1 + beta delta)` and
/// `C4 = -ln(1 - eps) + ln(1 + beta delta)`.
pub fn optimal_streams_tc(
    params: &NetworkParams,
    epsilon: f64,
    method: PlanMethod,
) -> Result<StreamPlan> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonOutOfRange { epsilon });
    }
    let derived = params.validate()?;
    let m = params.m_antennas;
    let mut curve = Vec::with_capacity(m);
    for k in 1..=m {
        curve.push(transmission_capacity(&profile_with_streams(params, k)?, epsilon)?.capacity);
    }
    let k_star = match method {
        PlanMethod::Enumeration => argmax_low_tie(&curve) + 1,
        PlanMethod::LargeKApprox => {
            let quant = (1.0 + derived.beta_max * derived.delta).ln();
            let c3 = params.noise * derived.zeta_max / params.power + quant;
            let c4 = -(1.0 - epsilon).ln() + quant;
            let frac = (1.0 - 2.0 / params.alpha) * c4 / ((2.0 - 2.0 / params.alpha) * c3);
            clamp_k(frac, m)
        }
    };
    Ok(StreamPlan {
        k_star,
        objective_curve: curve,
        method,
    })
}

/// Antenna count (serving M = K streams) maximizing the throughput lower
/// bound over 1..m_max at the given bit budget; delta is recomputed per M.
pub fn optimal_antennas_throughput(params: &NetworkParams, m_max: usize) -> Result<usize> {
    if m_max < 1 {
        return Err(Error::NonPositiveArgument {
            name: "m_max",
            value: m_max as f64,
        });
    }
    let derived = params.validate()?;
    let mut curve = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let mut p = params.clone();
        p.m_antennas = m;
        p.k_streams = m;
        p.beta_per_user = vec![derived.beta_max; m];
        p.dist_per_user = vec![derived.d_max; m];
        curve.push(network_throughput_lb(&p)?);
    }
    Ok(argmax_low_tie(&curve) + 1)
}

const OFFSET_SLACK: f64 = 1e-9;

fn smallest_bits_satisfying<F: Fn(u32) -> Result<f64>>(
    threshold_guess: f64,
    target: f64,
    gap_at: F,
) -> Result<u32> {
    let mut bits = if threshold_guess.is_finite() && threshold_guess > 0.0 {
        threshold_guess.ceil() as u32
    } else {
        0
    };
    let ok = |g: f64| g <= target * (1.0 + OFFSET_SLACK) + f64::MIN_POSITIVE;
    while !ok(gap_at(bits)?) {
        bits += 1;
    }
    while bits > 0 && ok(gap_at(bits - 1)?) {
        bits -= 1;
    }
    Ok(bits)
}

/// Smallest bit budget keeping the transmission-capacity gap below `ln c`:
///
/// `B >= (M-1) log2(beta) - (M-1) log2(c^E - 1)` with
/// `E = I_K zeta_max^(2/alpha) / (K(K-1)(1-eps))`, re-verified against the
/// actual gap. Valid window: 1 < c <= (1+beta)^(1/E); a zero-gap target
/// (c = 1) needs perfect CSI and is reported as infeasible.
pub fn bits_for_tc_offset(params: &NetworkParams, epsilon: f64, c: f64) -> Result<FeedbackPlan> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonOutOfRange { epsilon });
    }
    let derived = params.validate()?;
    let k = params.k_streams;
    if k == 1 {
        // no self-interference stream, zero gap at any budget
        return Ok(FeedbackPlan {
            bits_required: 0,
            offset_kind: OffsetKind::TcGap { factor: c },
        });
    }
    let kf = k as f64;
    let i_k = interference_constant(k, params.alpha)?;
    let exponent =
        i_k * derived.zeta_max.powf(2.0 / params.alpha) / (kf * (kf - 1.0) * (1.0 - epsilon));
    let hi = (1.0 + derived.beta_max).powf(1.0 / exponent);
    if c < 1.0 || c > hi * (1.0 + OFFSET_SLACK) {
        return Err(Error::OffsetOutOfRange {
            value: c,
            lo: 1.0,
            hi,
        });
    }
    if c == 1.0 {
        return Err(Error::InfeasibleRegime(
            "zero capacity gap requires perfect CSI (no finite bit budget)".into(),
        ));
    }
    let grown = c.powf(exponent) - 1.0;
    let threshold = (params.m_antennas as f64 - 1.0) * (derived.beta_max / grown).log2();
    let target = c.ln();
    let bits = smallest_bits_satisfying(threshold, target, |b| {
        let mut p = params.clone();
        p.bits = crate::params::FeedbackBits::Finite(b);
        tc_gap(&p, epsilon)
    })?;
    Ok(FeedbackPlan {
        bits_required: bits,
        offset_kind: OffsetKind::TcGap { factor: c },
    })
}

/// Smallest bit budget keeping the perfect-to-quantized throughput ratio
/// below `r`:
///
/// `B >= (M-1) log2(beta) - (M-1) log2(r^(1/(K-1)) - 1)`, valid for
/// 1 < r <= (1+beta)^(K-1). K = 1 has no quantization-induced ratio.
pub fn bits_for_throughput_ratio(params: &NetworkParams, r: f64) -> Result<FeedbackPlan> {
    let derived = params.validate()?;
    let k = params.k_streams;
    if k == 1 {
        return Err(Error::SingleStream);
    }
    let kf = k as f64;
    let hi = (1.0 + derived.beta_max).powi(k as i32 - 1);
    if r < 1.0 || r > hi * (1.0 + OFFSET_SLACK) {
        return Err(Error::OffsetOutOfRange { value: r, lo: 1.0, hi });
    }
    if r == 1.0 {
        return Err(Error::InfeasibleRegime(
            "unit throughput ratio requires perfect CSI (no finite bit budget)".into(),
        ));
    }
    let grown = r.powf(1.0 / (kf - 1.0)) - 1.0;
    let threshold = (params.m_antennas as f64 - 1.0) * (derived.beta_max / grown).log2();
    let bits = smallest_bits_satisfying(threshold, r, |b| {
        let mut p = params.clone();
        p.bits = crate::params::FeedbackBits::Finite(b);
        throughput_ratio_gap(&p)
    })?;
    Ok(FeedbackPlan {
        bits_required: bits,
        offset_kind: OffsetKind::ThroughputRatio { ratio: r },
    })
}

/// The simple scaling rule `B = ceil((M-1) beta_dB / 3)`, the
/// `r = 2^(K-1)` special case of the throughput-ratio planner.
pub fn bits_three_db_rule(params: &NetworkParams) -> Result<FeedbackPlan> {
    let derived = params.validate()?;
    let beta_db = linear_to_db(derived.beta_max);
    let bits = ((params.m_antennas as f64 - 1.0) * beta_db / 3.0).ceil().max(0.0) as u32;
    Ok(FeedbackPlan {
        bits_required: bits,
        offset_kind: OffsetKind::ThreeDbRule,
    })
}
