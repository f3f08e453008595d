//! Domain types: the network parameter tuple, derived scalar quantities, and
//! the feedback quantization model selector.
//!
//! All types here are immutable value objects; they are `Send + Sync` and safe
//! to share across sweep threads.

use serde::Serialize;

use crate::error::{Error, Result, Violation};

/// Per-user feedback budget. `Infinite` models perfect channel direction
/// information at the transmitter (quantization error bound delta = 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FeedbackBits {
    Finite(u32),
    Infinite,
}

impl FeedbackBits {
    pub fn is_finite(self) -> bool {
        matches!(self, FeedbackBits::Finite(_))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            FeedbackBits::Finite(b) => Some(b),
            FeedbackBits::Infinite => None,
        }
    }
}

impl std::fmt::Display for FeedbackBits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FeedbackBits::Finite(b) => write!(f, "{b}"),
            FeedbackBits::Infinite => write!(f, "inf"),
        }
    }
}

/// Feedback model used when drawing quantized channel directions.
///
/// `Qca` draws the quantization error from the quantization cell
/// approximation cdf `2^B x^(M-1)` on `[0, delta]`; `Rvq` searches a random
/// codebook of `2^B` isotropic unit vectors by chordal distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QuantizationScheme {
    PerfectCsi,
    Qca,
    Rvq,
}

/// Full parameter tuple consumed by every metric.
///
/// A transmitter with `m_antennas` antennas serves `k_streams` single-antenna
/// users over a plane of interferers drawn from a Poisson point process of
/// intensity `lambda`. Each user `k` sits at distance `dist_per_user[k]` and
/// carries SINR target `beta_per_user[k]` (linear). Per-stream power is
/// `rho = power / k_streams`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkParams {
    /// Transmitter density (nodes per unit area, >= 0).
    pub lambda: f64,
    /// Path-loss exponent (> 2).
    pub alpha: f64,
    /// Transmit antennas M (>= 1).
    pub m_antennas: usize,
    /// Served users / streams K (1 <= K <= M).
    pub k_streams: usize,
    /// Feedback bits per user.
    pub bits: FeedbackBits,
    /// Target SINR per user, linear scale.
    pub beta_per_user: Vec<f64>,
    /// Link distance per user.
    pub dist_per_user: Vec<f64>,
    /// Total transmit power P (> 0).
    pub power: f64,
    /// Noise variance sigma^2 (>= 0).
    pub noise: f64,
}

impl NetworkParams {
    /// Cluster with identical SINR target and link distance on every stream.
    #[allow(clippy::too_many_arguments)]
    pub fn symmetric(
        lambda: f64,
        alpha: f64,
        m_antennas: usize,
        k_streams: usize,
        bits: FeedbackBits,
        beta: f64,
        dist: f64,
        power: f64,
        noise: f64,
    ) -> Self {
        NetworkParams {
            lambda,
            alpha,
            m_antennas,
            k_streams,
            bits,
            beta_per_user: vec![beta; k_streams],
            dist_per_user: vec![dist; k_streams],
            power,
            noise,
        }
    }

    /// Sets the noise variance from a per-stream SNR (dB), `snr = rho / sigma^2`.
    pub fn with_snr_db(mut self, snr_db: f64) -> Self {
        self.noise = self.rho() / 10f64.powf(snr_db / 10.0);
        self
    }

    /// Per-stream transmit power `rho = P / K`.
    pub fn rho(&self) -> f64 {
        self.power / self.k_streams as f64
    }

    /// Per-stream SNR `rho / sigma^2`; infinite when the noise is zero.
    pub fn snr(&self) -> f64 {
        if self.noise == 0.0 {
            f64::INFINITY
        } else {
            self.rho() / self.noise
        }
    }

    /// Quantization error bound delta for this configuration.
    ///
    /// `delta = 2^(-B/(M-1))` for finite feedback with M >= 2; zero for
    /// perfect CSI. A single antenna has no direction to quantize, so M = 1
    /// is treated as perfect CSI regardless of the bit budget.
    pub fn delta(&self) -> f64 {
        match self.bits {
            FeedbackBits::Infinite => 0.0,
            FeedbackBits::Finite(_) if self.m_antennas == 1 => 0.0,
            FeedbackBits::Finite(b) => {
                quantization_error_bound(self.m_antennas, f64::from(b))
            }
        }
    }

    /// Checks every invariant and returns the derived scalars, or an error
    /// listing all violations.
    pub fn validate(&self) -> Result<DerivedScalars> {
        let mut violations = Vec::new();
        if !(self.alpha > 2.0) {
            violations.push(Violation::AlphaOutOfRange(self.alpha));
        }
        if self.m_antennas == 0 {
            violations.push(Violation::ZeroAntennas);
        }
        if self.k_streams == 0 {
            violations.push(Violation::ZeroStreams);
        }
        if self.k_streams > self.m_antennas {
            violations.push(Violation::StreamsExceedAntennas {
                k: self.k_streams,
                m: self.m_antennas,
            });
        }
        if !(self.lambda >= 0.0) {
            violations.push(Violation::NegativeDensity(self.lambda));
        }
        if self.beta_per_user.len() != self.k_streams {
            violations.push(Violation::UserListLength {
                name: "beta_per_user",
                got: self.beta_per_user.len(),
                want: self.k_streams,
            });
        }
        if self.dist_per_user.len() != self.k_streams {
            violations.push(Violation::UserListLength {
                name: "dist_per_user",
                got: self.dist_per_user.len(),
                want: self.k_streams,
            });
        }
        for (i, &b) in self.beta_per_user.iter().enumerate() {
            if !(b > 0.0) {
                violations.push(Violation::NonPositiveBeta { index: i, value: b });
            }
        }
        for (i, &d) in self.dist_per_user.iter().enumerate() {
            if !(d > 0.0) {
                violations.push(Violation::NonPositiveDistance { index: i, value: d });
            }
        }
        if !(self.power > 0.0) {
            violations.push(Violation::NonPositivePower(self.power));
        }
        if !(self.noise >= 0.0) {
            violations.push(Violation::NegativeNoise(self.noise));
        }
        if !violations.is_empty() {
            return Err(Error::InvalidParams(violations));
        }

        let zeta_per_user: Vec<f64> = self
            .beta_per_user
            .iter()
            .zip(&self.dist_per_user)
            .map(|(&b, &d)| b * d.powf(self.alpha))
            .collect();
        let beta_max = self.beta_per_user.iter().cloned().fold(f64::MIN, f64::max);
        let d_max = self.dist_per_user.iter().cloned().fold(f64::MIN, f64::max);
        Ok(DerivedScalars {
            delta: self.delta(),
            zeta_per_user,
            zeta_max: beta_max * d_max.powf(self.alpha),
            d_max,
            beta_max,
        })
    }
}

/// Validates `params` and computes the derived scalar quantities.
pub fn validate(params: &NetworkParams) -> Result<DerivedScalars> {
    params.validate()
}

/// Quantization error bound `2^(-B/(M-1))` for a real-valued bit budget.
///
/// Exposed separately from [`NetworkParams::delta`] so that bit-scaling laws
/// such as `B = (M-1) log2(M^eta)` can be evaluated without rounding B to an
/// integer.
pub fn quantization_error_bound(m_antennas: usize, bits: f64) -> f64 {
    if m_antennas <= 1 {
        return 0.0;
    }
    2f64.powf(-bits / (m_antennas as f64 - 1.0))
}

/// Scalars derived from a validated [`NetworkParams`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedScalars {
    /// Quantization error bound delta in [0, 1].
    pub delta: f64,
    /// Composite threshold `zeta_k = beta_k * d_k^alpha` per user.
    pub zeta_per_user: Vec<f64>,
    /// `beta_max * d_max^alpha`, the worst-case composite threshold.
    pub zeta_max: f64,
    /// Largest link distance in the cluster.
    pub d_max: f64,
    /// Largest SINR target in the cluster.
    pub beta_max: f64,
}

/// Lower/exact/upper rate triple with the provenance of each member.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSet {
    /// Lower bound on the ergodic rate (nats/s/Hz).
    pub lower: f64,
    /// Exact ergodic rate by quadrature (nats/s/Hz).
    pub exact: f64,
    /// Upper bound on the ergodic rate (nats/s/Hz).
    pub upper: f64,
    /// Method label for each member, in (lower, exact, upper) order.
    pub method_tags: [&'static str; 3],
}

/// Converts a dB power ratio to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear power ratio to dB.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn base() -> NetworkParams {
        NetworkParams::symmetric(
            0.01,
            4.0,
            4,
            4,
            FeedbackBits::Finite(10),
            db_to_linear(1.0),
            1.5,
            1.0,
            0.0,
        )
    }

    #[test]
    fn delta_direct_evaluation() {
        let mut p = base();
        p.bits = FeedbackBits::Finite(9);
        let d = p.validate().unwrap();
        assert_relative_eq!(d.delta, 0.125, max_relative = 1e-15);

        let mut p = base();
        p.m_antennas = 2;
        p.k_streams = 2;
        p.beta_per_user.truncate(2);
        p.dist_per_user.truncate(2);
        p.bits = FeedbackBits::Finite(0);
        assert_relative_eq!(p.validate().unwrap().delta, 1.0);
    }

    #[test]
    fn zeta_hand_value() {
        // beta = 1 dB, d = 1.5, alpha = 4 -> zeta = 1.2589... * 1.5^4
        let p = base();
        let d = p.validate().unwrap();
        assert_relative_eq!(d.zeta_per_user[0], 6.3733, max_relative = 1e-4);
        assert_relative_eq!(d.zeta_max, d.zeta_per_user[0], max_relative = 1e-15);
    }

    #[test]
    fn infinite_bits_and_single_antenna_give_zero_delta() {
        let mut p = base();
        p.bits = FeedbackBits::Infinite;
        assert_eq!(p.validate().unwrap().delta, 0.0);

        let siso = NetworkParams::symmetric(
            0.01,
            4.0,
            1,
            1,
            FeedbackBits::Finite(8),
            1.0,
            1.0,
            1.0,
            0.0,
        );
        assert_eq!(siso.validate().unwrap().delta, 0.0);
    }

    #[test]
    fn validation_collects_every_violation() {
        let p = NetworkParams {
            lambda: -1.0,
            alpha: 1.5,
            m_antennas: 2,
            k_streams: 3,
            bits: FeedbackBits::Finite(4),
            beta_per_user: vec![1.0, -2.0, 1.0],
            dist_per_user: vec![1.0, 1.0, 0.0],
            power: 0.0,
            noise: -0.1,
        };
        let err = p.validate().unwrap_err();
        match err {
            Error::InvalidParams(v) => {
                assert!(v.contains(&Violation::AlphaOutOfRange(1.5)));
                assert!(v.contains(&Violation::StreamsExceedAntennas { k: 3, m: 2 }));
                assert!(v.contains(&Violation::NonPositiveDistance { index: 2, value: 0.0 }));
                assert!(v.len() >= 6);
            }
            other => panic!("expected InvalidParams, got {other:?}"),
        }
    }

    #[test]
    fn snr_roundtrip() {
        let p = base().with_snr_db(20.0);
        assert_relative_eq!(p.snr(), 100.0, max_relative = 1e-12);
        assert_relative_eq!(p.rho(), 0.25, max_relative = 1e-15);
    }

    #[test]
    fn delta_monotonic_in_bits_and_antennas() {
        // strictly decreasing in B, strictly increasing in M for fixed B > 0
        for m in 2..=8usize {
            let mut last = f64::INFINITY;
            for b in 1..=20u32 {
                let d = quantization_error_bound(m, f64::from(b));
                assert!(d < last, "delta not decreasing in B at M={m}, B={b}");
                last = d;
            }
        }
        for b in 1..=20u32 {
            let mut last = 0.0;
            for m in 2..=8usize {
                let d = quantization_error_bound(m, f64::from(b));
                assert!(d > last, "delta not increasing in M at M={m}, B={b}");
                last = d;
            }
        }
    }
}
