//! From-scratch simulation of the physical model: Poisson interferer fields,
//! Rayleigh channels, quantized feedback, zero-forcing beamforming, and
//! empirical SINR statistics.

pub mod linalg;
pub mod sampling;
pub mod stats;

mod cluster;
mod estimator;

pub use cluster::{channel_norm_sq, sample_interferer_mark_physical, simulate_cluster, SinrSample};
pub use estimator::{estimate, MetricEstimate};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{NetworkParams, QuantizationScheme};

/// Interferer-window truncation policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum WindowPolicy {
    /// Single window of the given radius.
    FixedRadius(f64),
    /// Start at `init_radius` and double until the estimate moves by less
    /// than `rel_tol` (relative) between consecutive radii.
    AdaptiveDoubling { init_radius: f64, rel_tol: f64 },
}

impl WindowPolicy {
    pub fn initial_radius(&self) -> f64 {
        match *self {
            WindowPolicy::FixedRadius(r) => r,
            WindowPolicy::AdaptiveDoubling { init_radius, .. } => init_radius,
        }
    }
}

/// Cluster sampling fidelity.
///
/// `Fast` samples the model's marginal distributions directly (Exp(1) signal,
/// Gamma-chain self-interference, Gamma(K,1) field marks). `FullPhysics`
/// builds every channel vector and precoder explicitly, including each
/// interferer's own zero-forcing precoder. Both reproduce the same
/// statistics; fast mode is roughly two orders of magnitude cheaper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SimMode {
    Fast,
    FullPhysics,
}

/// Which empirical quantity [`estimate`] accumulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Metric {
    /// Fraction of streams below their SINR target.
    Outage,
    /// `lambda sum_k 1{sinr_k > beta_k} log2(1 + beta_k)`.
    Throughput,
    /// Mean `ln(1 + sinr)` across streams, nats/s/Hz.
    MeanRate,
}

/// Monte Carlo run configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub trials: usize,
    pub seed: u64,
    pub window: WindowPolicy,
    pub quantization: QuantizationScheme,
    pub mode: SimMode,
    /// Worker thread count; `None` uses the ambient rayon pool. The estimate
    /// is bit-identical either way.
    pub workers: Option<usize>,
}

impl SimConfig {
    /// Default configuration: QCA feedback, fast mode, adaptive window
    /// starting at 20 d_max with a 5e-3 doubling tolerance.
    pub fn for_params(params: &NetworkParams, trials: usize, seed: u64) -> Self {
        let d_max = params
            .dist_per_user
            .iter()
            .cloned()
            .fold(1.0f64, f64::max);
        SimConfig {
            trials,
            seed,
            window: WindowPolicy::AdaptiveDoubling {
                init_radius: 20.0 * d_max,
                rel_tol: 5e-3,
            },
            quantization: QuantizationScheme::Qca,
            mode: SimMode::Fast,
            workers: None,
        }
    }

    pub(crate) fn check(&self, params: &NetworkParams) -> Result<()> {
        if self.trials < 100 {
            return Err(Error::InvalidSimConfig(format!(
                "need at least 100 trials, got {}",
                self.trials
            )));
        }
        match self.window {
            WindowPolicy::FixedRadius(r) if !(r > 0.0) => {
                return Err(Error::InvalidSimConfig(format!("window radius {r} <= 0")));
            }
            WindowPolicy::AdaptiveDoubling { init_radius, rel_tol } => {
                if !(init_radius > 0.0) {
                    return Err(Error::InvalidSimConfig(format!(
                        "initial radius {init_radius} <= 0"
                    )));
                }
                if !(rel_tol > 0.0 && rel_tol <= 0.1) {
                    return Err(Error::InvalidSimConfig(format!(
                        "doubling rel_tol {rel_tol} outside (0, 0.1]"
                    )));
                }
            }
            _ => {}
        }
        if self.quantization == QuantizationScheme::Rvq {
            match params.bits.finite() {
                None => {
                    return Err(Error::InvalidSimConfig(
                        "RVQ requires a finite bit budget".into(),
                    ));
                }
                Some(b) if b > sampling::MAX_RVQ_BITS => {
                    return Err(Error::CodebookTooLarge {
                        bits: b,
                        max: sampling::MAX_RVQ_BITS,
                    });
                }
                _ => {}
            }
        }
        Ok(())
    }
}

fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-trial RNG stream: seed salted by the window round, ChaCha stream id
/// set to the trial index. A pure function of its arguments.
pub(crate) fn trial_rng(seed: u64, round: u32, trial: u64) -> ChaCha8Rng {
    let salted = mix64(seed ^ mix64(u64::from(round)));
    let mut rng = ChaCha8Rng::seed_from_u64(salted);
    rng.set_stream(trial);
    rng
}
