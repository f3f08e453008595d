//! One-trial physics: the typical broadcast cluster (channels, quantization,
//! zero-forcing) and the surrounding interferer field.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::montecarlo::linalg::{dot, norm, norm_sq, scale, zf_beamformers};
use crate::montecarlo::sampling::{
    draw_channel, quantize_qca, quantize_rvq, random_codebook, sample_field_mark,
    sample_intra_cluster, sample_ppp,
};
use crate::montecarlo::{trial_rng, SimConfig, SimMode};
use crate::params::{NetworkParams, QuantizationScheme};

/// Per-user SINR decomposition for one trial, in received-power units.
///
/// Each user sees its own realization of the interferer field, matching the
/// per-user analysis of the typical cluster. Every entry satisfies
/// `per_user_sinr = signal / (inter_cluster + intra_cluster + noise)`.
#[derive(Debug, Clone)]
pub struct SinrSample {
    /// Linear SINR per user.
    pub per_user_sinr: Vec<f64>,
    /// Desired-signal power `rho |h_k w_k|^2 d_k^-alpha` per user.
    pub signal: Vec<f64>,
    /// Inter-cluster interference power I_p per user.
    pub inter_cluster: Vec<f64>,
    /// Intra-cluster self-interference power I_q per user.
    pub intra_cluster: Vec<f64>,
}

/// Normalized own-cluster gains: `signal[k] = |h_k w_k|^2` and
/// `cross[k] = sum_{j != k} |h_k w_j|^2` (distance and power applied later).
pub(crate) struct ClusterGains {
    pub signal: Vec<f64>,
    pub cross: Vec<f64>,
}

const SINGULAR_RETRIES: usize = 32;

/// Builds the cluster from explicit channel vectors and precoders.
pub(crate) fn draw_cluster_physical<R: Rng + ?Sized>(
    params: &NetworkParams,
    scheme: QuantizationScheme,
    rng: &mut R,
) -> Result<ClusterGains> {
    let m = params.m_antennas;
    let k = params.k_streams;
    let bits = params.bits.finite();

    for attempt in 0..=SINGULAR_RETRIES {
        let channels: Vec<Vec<Complex64>> = (0..k).map(|_| draw_channel(m, rng)).collect();
        let mut rows = Vec::with_capacity(k);
        for h in &channels {
            let row = match (scheme, bits) {
                (QuantizationScheme::PerfectCsi, _) | (_, None) => scale(h, 1.0 / norm(h)),
                (QuantizationScheme::Qca, Some(b)) => {
                    if m == 1 {
                        scale(h, 1.0 / norm(h))
                    } else {
                        quantize_qca(h, b, rng)?.direction
                    }
                }
                (QuantizationScheme::Rvq, Some(b)) => {
                    if m == 1 {
                        scale(h, 1.0 / norm(h))
                    } else {
                        let codebook = random_codebook(m, b, rng)?;
                        quantize_rvq(h, &codebook)
                    }
                }
            };
            rows.push(row);
        }
        match zf_beamformers(&rows) {
            Ok(w) => {
                let mut signal = Vec::with_capacity(k);
                let mut cross = Vec::with_capacity(k);
                for (ki, h) in channels.iter().enumerate() {
                    signal.push(dot(h, &w[ki]).norm_sqr());
                    cross.push(
                        (0..k)
                            .filter(|&j| j != ki)
                            .map(|j| dot(h, &w[j]).norm_sqr())
                            .sum(),
                    );
                }
                return Ok(ClusterGains { signal, cross });
            }
            // probability-zero event with random directions; resample
            Err(Error::SingularMatrix) if attempt < SINGULAR_RETRIES => continue,
            Err(e) => return Err(e),
        }
    }
    unreachable!("retry loop returns or propagates");
}

/// Samples the cluster gains through the marginal distributions of the
/// quantization-cell model: signal ~ Exp(1), residual cross-interference via
/// the Gamma/Beta chain.
pub(crate) fn draw_cluster_fast<R: Rng + ?Sized>(
    params: &NetworkParams,
    delta: f64,
    rng: &mut R,
) -> ClusterGains {
    let k = params.k_streams;
    let exp1 = Exp::new(1.0).expect("unit rate");
    let mut signal = Vec::with_capacity(k);
    let mut cross = Vec::with_capacity(k);
    for _ in 0..k {
        signal.push(exp1.sample(rng));
        cross.push(sample_intra_cluster(params.m_antennas, k, delta, rng));
    }
    ClusterGains { signal, cross }
}

pub(crate) fn draw_cluster<R: Rng + ?Sized>(
    params: &NetworkParams,
    cfg: &SimConfig,
    delta: f64,
    rng: &mut R,
) -> Result<ClusterGains> {
    match (cfg.mode, cfg.quantization) {
        // RVQ has no marginal sampling shortcut; it always goes through vectors
        (SimMode::Fast, QuantizationScheme::Rvq) | (SimMode::FullPhysics, _) => {
            draw_cluster_physical(params, cfg.quantization, rng)
        }
        (SimMode::Fast, _) => Ok(draw_cluster_fast(params, delta, rng)),
    }
}

/// One inter-cluster fading mark `||h W_i||^2`, building the interfering
/// transmitter's zero-forcing precoder from its own users' quantized
/// directions. Those directions are isotropic regardless of feedback quality,
/// so the mark distribution does not depend on B.
pub fn sample_interferer_mark_physical<R: Rng + ?Sized>(
    m: usize,
    k: usize,
    rng: &mut R,
) -> Result<f64> {
    for attempt in 0..=SINGULAR_RETRIES {
        let rows: Vec<Vec<Complex64>> = (0..k)
            .map(|_| {
                let g = draw_channel(m, rng);
                scale(&g, 1.0 / norm(&g))
            })
            .collect();
        match zf_beamformers(&rows) {
            Ok(w) => {
                let h = draw_channel(m, rng);
                return Ok(w.iter().map(|wj| dot(&h, wj).norm_sqr()).sum());
            }
            Err(Error::SingularMatrix) if attempt < SINGULAR_RETRIES => continue,
            Err(e) => return Err(e),
        }
    }
    unreachable!()
}

pub(crate) fn field_interference<R: Rng + ?Sized>(
    params: &NetworkParams,
    cfg: &SimConfig,
    distances: &[f64],
    rng: &mut R,
) -> Result<f64> {
    let mut total = 0.0;
    for &d in distances {
        let mark = match cfg.mode {
            SimMode::Fast => sample_field_mark(params.k_streams, rng),
            SimMode::FullPhysics => {
                sample_interferer_mark_physical(params.m_antennas, params.k_streams, rng)?
            }
        };
        total += mark * d.powf(-params.alpha);
    }
    Ok(total)
}

/// Simulates one trial of the typical cluster at the window's initial radius
/// and returns the per-user SINR decomposition.
pub fn simulate_cluster(params: &NetworkParams, cfg: &SimConfig, trial: u64) -> Result<SinrSample> {
    let derived = params.validate()?;
    cfg.check(params)?;
    let radius = cfg.window.initial_radius();
    let mut rng = trial_rng(cfg.seed, 0, trial);
    let gains = draw_cluster(params, cfg, derived.delta, &mut rng)?;

    let rho = params.rho();
    let k = params.k_streams;
    let mut sample = SinrSample {
        per_user_sinr: Vec::with_capacity(k),
        signal: Vec::with_capacity(k),
        inter_cluster: Vec::with_capacity(k),
        intra_cluster: Vec::with_capacity(k),
    };
    for u in 0..k {
        let d = params.dist_per_user[u];
        let path = d.powf(-params.alpha);
        let distances = sample_ppp(params.lambda, radius, &mut rng);
        let ip = rho * field_interference(params, cfg, &distances, &mut rng)?;
        let iq = rho * gains.cross[u] * path;
        let sig = rho * gains.signal[u] * path;
        sample.per_user_sinr.push(sig / (ip + iq + params.noise));
        sample.signal.push(sig);
        sample.inter_cluster.push(ip);
        sample.intra_cluster.push(iq);
    }
    Ok(sample)
}

/// Norm-squared helper re-exported for the distributional tests.
pub fn channel_norm_sq(h: &[Complex64]) -> f64 {
    norm_sq(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::WindowPolicy;
    use crate::params::{db_to_linear, FeedbackBits};
    use approx::assert_relative_eq;

    fn params(lambda: f64, bits: FeedbackBits) -> NetworkParams {
        NetworkParams::symmetric(lambda, 4.0, 4, 4, bits, db_to_linear(1.0), 1.5, 1.0, 0.0)
            .with_snr_db(20.0)
    }

    fn cfg(p: &NetworkParams) -> SimConfig {
        SimConfig::for_params(p, 1000, 9)
    }

    #[test]
    fn perfect_csi_nulls_intra_cluster_exactly() {
        let p = params(0.01, FeedbackBits::Infinite);
        let mut c = cfg(&p);
        c.mode = SimMode::FullPhysics;
        for trial in 0..20 {
            let s = simulate_cluster(&p, &c, trial).unwrap();
            for &iq in &s.intra_cluster {
                assert!(iq < 1e-18, "perfect ZF left intra-cluster power {iq}");
            }
        }
    }

    #[test]
    fn no_field_sinr_reconstruction() {
        let p = params(0.0, FeedbackBits::Finite(8));
        let c = cfg(&p);
        for trial in 0..50 {
            let s = simulate_cluster(&p, &c, trial).unwrap();
            for u in 0..p.k_streams {
                assert_eq!(s.inter_cluster[u], 0.0);
                let want = s.signal[u] / (s.intra_cluster[u] + p.noise);
                assert_relative_eq!(s.per_user_sinr[u], want, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn fixed_seed_reproduces_samples() {
        let p = params(0.02, FeedbackBits::Finite(8));
        let mut c = cfg(&p);
        c.window = WindowPolicy::FixedRadius(25.0);
        let a = simulate_cluster(&p, &c, 5).unwrap();
        let b = simulate_cluster(&p, &c, 5).unwrap();
        assert_eq!(a.per_user_sinr, b.per_user_sinr);
        let other = simulate_cluster(&p, &c, 6).unwrap();
        assert_ne!(a.per_user_sinr, other.per_user_sinr);
    }
}
