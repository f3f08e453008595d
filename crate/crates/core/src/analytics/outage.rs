//! Outage probability, network throughput, and the interference constant of
//! the Poisson field.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::NetworkParams;
use crate::specfun::{beta_fn, gamma_fn};

/// Interference constant of a Poisson field whose marks are sums of
/// `k_streams` unit-mean exponentials:
///
/// `I_K = (2 pi / alpha) sum_{m=0}^{K-1} C(K, m) B(m + 2/alpha, K - m - 2/alpha)`.
///
/// Strictly increasing in K; diverges as alpha -> 2.
pub fn interference_constant(k_streams: usize, alpha: f64) -> Result<f64> {
    if k_streams < 1 {
        return Err(Error::NonPositiveArgument {
            name: "k_streams",
            value: k_streams as f64,
        });
    }
    if !(alpha > 2.0) {
        return Err(Error::AlphaOutOfRange { alpha });
    }
    let two_over_alpha = 2.0 / alpha;
    let mut sum = 0.0;
    let mut binom = 1.0f64; // C(K, m), updated incrementally
    let k = k_streams as f64;
    for m in 0..k_streams {
        let mf = m as f64;
        sum += binom * beta_fn(mf + two_over_alpha, k - mf - two_over_alpha)?;
        binom *= (k - mf) / (mf + 1.0);
    }
    Ok(2.0 * std::f64::consts::PI / alpha * sum)
}

/// Large-K asymptote `I_K ~ pi Gamma(1 - 2/alpha) K^(2/alpha)`.
pub fn interference_constant_large_k(k_streams: f64, alpha: f64) -> Result<f64> {
    if !(k_streams >= 1.0) {
        return Err(Error::NonPositiveArgument {
            name: "k_streams",
            value: k_streams,
        });
    }
    if !(alpha > 2.0) {
        return Err(Error::AlphaOutOfRange { alpha });
    }
    Ok(std::f64::consts::PI * gamma_fn(1.0 - 2.0 / alpha)? * k_streams.powf(2.0 / alpha))
}

/// Probability that user `k` meets its SINR target:
///
/// `exp(-lambda I_K zeta_k^(2/alpha)) exp(-sigma^2 zeta_k / rho) / (1 + beta_k delta)^(K-1)`.
pub fn success_probability(params: &NetworkParams, user: usize) -> Result<f64> {
    let derived = params.validate()?;
    let i_k = interference_constant(params.k_streams, params.alpha)?;
    let zeta = derived.zeta_per_user[user];
    let beta = params.beta_per_user[user];
    let field = (-params.lambda * i_k * zeta.powf(2.0 / params.alpha)).exp();
    let noise = (-params.noise * zeta / params.rho()).exp();
    let quant = (1.0 + beta * derived.delta).powi(params.k_streams as i32 - 1);
    Ok(field * noise / quant)
}

/// Outage probability of user `k`, `1 - success_probability`.
pub fn outage_probability(params: &NetworkParams, user: usize) -> Result<f64> {
    Ok(1.0 - success_probability(params, user)?)
}

/// Per-user outage and success probabilities for the whole cluster.
#[derive(Debug, Clone, Serialize)]
pub struct OutageResult {
    pub per_user: Vec<f64>,
    pub success_per_user: Vec<f64>,
}

pub fn outage_all(params: &NetworkParams) -> Result<OutageResult> {
    let mut per_user = Vec::with_capacity(params.k_streams);
    let mut success_per_user = Vec::with_capacity(params.k_streams);
    for k in 0..params.k_streams {
        let s = success_probability(params, k)?;
        success_per_user.push(s);
        per_user.push(1.0 - s);
    }
    Ok(OutageResult {
        per_user,
        success_per_user,
    })
}

/// Network throughput in bits/s/Hz/unit area:
/// `lambda sum_k success_k log2(1 + beta_k)`.
pub fn network_throughput(params: &NetworkParams) -> Result<f64> {
    let mut total = 0.0;
    for k in 0..params.k_streams {
        total += success_probability(params, k)? * (1.0 + params.beta_per_user[k]).log2();
    }
    Ok(params.lambda * total)
}

/// Worst-case throughput lower bound built on `zeta_max`:
/// `K lambda success(zeta_max) log2(1 + beta_min)`.
///
/// Equals the exact throughput when every stream shares the same target and
/// distance. With heterogeneous targets the rate factor uses the smallest
/// beta so the bound stays valid.
pub fn network_throughput_lb(params: &NetworkParams) -> Result<f64> {
    let derived = params.validate()?;
    let i_k = interference_constant(params.k_streams, params.alpha)?;
    let zeta = derived.zeta_max;
    let field = (-params.lambda * i_k * zeta.powf(2.0 / params.alpha)).exp();
    let noise = (-params.noise * zeta / params.rho()).exp();
    let quant = (1.0 + derived.beta_max * derived.delta).powi(params.k_streams as i32 - 1);
    let beta_min = params
        .beta_per_user
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    Ok(params.k_streams as f64 * params.lambda * field * noise / quant
        * (1.0 + beta_min).log2())
}

/// Throughput-maximizing transmitter density
/// `lambda* = (I_K beta^(2/alpha) d_max^2)^(-1) = 1 / (I_K zeta_max^(2/alpha))`.
///
/// Independent of the feedback budget.
pub fn optimal_density(params: &NetworkParams) -> Result<f64> {
    let derived = params.validate()?;
    let i_k = interference_constant(params.k_streams, params.alpha)?;
    Ok(1.0 / (i_k * derived.zeta_max.powf(2.0 / params.alpha)))
}

/// Throughput ratio between perfect-CSI and quantized zero-forcing,
/// `QT = (1 + beta delta)^(K-1)`.
pub fn throughput_ratio_gap(params: &NetworkParams) -> Result<f64> {
    let derived = params.validate()?;
    Ok((1.0 + derived.beta_max * derived.delta).powi(params.k_streams as i32 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{db_to_linear, FeedbackBits};
    use approx::assert_relative_eq;

    fn fig1_params(m: usize, bits: FeedbackBits, lambda: f64) -> NetworkParams {
        NetworkParams::symmetric(lambda, 4.0, m, m, bits, db_to_linear(1.0), 1.5, 1.0, 0.0)
            .with_snr_db(20.0)
    }

    #[test]
    fn single_stream_quartic_constant_is_half_pi_squared() {
        let v = interference_constant(1, 4.0).unwrap();
        assert_relative_eq!(v, std::f64::consts::PI.powi(2) / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn constant_rejects_alpha_at_or_below_two() {
        assert!(matches!(
            interference_constant(1, 2.0),
            Err(Error::AlphaOutOfRange { .. })
        ));
        assert!(interference_constant(3, 1.5).is_err());
    }

    #[test]
    fn constant_strictly_increasing_in_streams() {
        for &alpha in &[2.5, 3.0, 4.0, 5.0] {
            let mut last = 0.0;
            for k in 1..=12 {
                let v = interference_constant(k, alpha).unwrap();
                assert!(v > last, "I_K not increasing at K={k}, alpha={alpha}");
                last = v;
            }
        }
    }

    #[test]
    fn large_k_asymptote_values() {
        assert_relative_eq!(
            interference_constant_large_k(1.0, 4.0).unwrap(),
            std::f64::consts::PI.powf(1.5),
            max_relative = 1e-12
        );
        // pi * Gamma(1/3) * 8^(2/3)
        assert_relative_eq!(
            interference_constant_large_k(8.0, 3.0).unwrap(),
            33.664_534_480_225_86,
            max_relative = 1e-10
        );
        let ratio = interference_constant(64, 4.0).unwrap()
            / interference_constant_large_k(64.0, 4.0).unwrap();
        assert!((0.9..=1.1).contains(&ratio), "ratio {ratio} outside [0.9, 1.1]");
    }

    #[test]
    fn outage_zero_without_interference_noise_or_quantization() {
        let mut p = fig1_params(4, FeedbackBits::Infinite, 0.0);
        p.noise = 0.0;
        assert_relative_eq!(outage_probability(&p, 0).unwrap(), 0.0);
    }

    #[test]
    fn noise_only_outage() {
        let p = NetworkParams::symmetric(
            0.0,
            4.0,
            1,
            1,
            FeedbackBits::Infinite,
            db_to_linear(1.0),
            1.5,
            1.0,
            0.0,
        )
        .with_snr_db(20.0);
        let zeta = db_to_linear(1.0) * 1.5f64.powi(4);
        let want = 1.0 - (-p.noise * zeta / p.rho()).exp();
        assert_relative_eq!(outage_probability(&p, 0).unwrap(), want, max_relative = 1e-12);
    }

    #[test]
    fn quantization_ratio_factorizes_success() {
        let quantized = fig1_params(4, FeedbackBits::Finite(10), 0.01);
        let perfect = fig1_params(4, FeedbackBits::Infinite, 0.01);
        let ratio = success_probability(&perfect, 0).unwrap()
            / success_probability(&quantized, 0).unwrap();
        assert_relative_eq!(
            ratio,
            throughput_ratio_gap(&quantized).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn throughput_zero_at_zero_density() {
        let p = fig1_params(4, FeedbackBits::Finite(10), 0.0);
        assert_eq!(network_throughput(&p).unwrap(), 0.0);
    }

    #[test]
    fn throughput_bound_tight_for_symmetric_users() {
        let p = fig1_params(4, FeedbackBits::Finite(10), 0.02);
        assert_relative_eq!(
            network_throughput(&p).unwrap(),
            network_throughput_lb(&p).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn optimal_density_ignores_feedback_bits() {
        let a = fig1_params(4, FeedbackBits::Finite(4), 0.01);
        let b = fig1_params(4, FeedbackBits::Finite(20), 0.01);
        assert_eq!(optimal_density(&a).unwrap(), optimal_density(&b).unwrap());
    }

    #[test]
    fn optimal_density_antenna_scaling() {
        // lambda*(M=16)/lambda*(M=1) tracks I_1/I_16 = Theta(M^(-2/alpha))
        let p1 = fig1_params(1, FeedbackBits::Infinite, 0.01);
        let p16 = NetworkParams::symmetric(
            0.01,
            4.0,
            16,
            16,
            FeedbackBits::Infinite,
            db_to_linear(1.0),
            1.5,
            1.0,
            0.0,
        );
        let ratio = optimal_density(&p16).unwrap() / optimal_density(&p1).unwrap();
        let scaling = 16f64.powf(-2.0 / 4.0);
        assert!(
            (ratio / scaling - 1.0).abs() < 0.15,
            "ratio {ratio} not within 15% of {scaling}"
        );
    }

    #[test]
    fn throughput_peaks_at_optimal_density() {
        let base = fig1_params(4, FeedbackBits::Finite(10), 0.01);
        let star = optimal_density(&base).unwrap();
        let at = |l: f64| {
            let mut p = base.clone();
            p.lambda = l;
            network_throughput(&p).unwrap()
        };
        assert!(at(star) > at(star * 1.1));
        assert!(at(star) > at(star * 0.9));
    }
}
