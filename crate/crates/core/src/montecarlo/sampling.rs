//! Random draws for the physical model: Poisson fields, Rayleigh channels,
//! and the two quantized-feedback models.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};

use crate::error::{Error, Result};
use crate::montecarlo::linalg::{inner, norm, scale};

/// Guard on random-codebook size (2^B codewords are materialized).
pub const MAX_RVQ_BITS: u32 = 20;

/// Distances from the window center to Poisson-field transmitters inside a
/// disc of the given radius: the count is Poisson(lambda pi r^2), positions
/// uniform over the disc.
pub fn sample_ppp<R: Rng + ?Sized>(lambda: f64, radius: f64, rng: &mut R) -> Vec<f64> {
    sample_annulus(lambda, 0.0, radius, rng)
}

/// Distances to field points in the annulus r_lo <= d < r_hi. Together with
/// [`sample_ppp`], successive annuli superpose into one Poisson field on the
/// larger disc.
pub fn sample_annulus<R: Rng + ?Sized>(
    lambda: f64,
    r_lo: f64,
    r_hi: f64,
    rng: &mut R,
) -> Vec<f64> {
    debug_assert!(r_hi >= r_lo && r_lo >= 0.0);
    let area = std::f64::consts::PI * (r_hi * r_hi - r_lo * r_lo);
    let mean = lambda * area;
    if mean <= 0.0 {
        return Vec::new();
    }
    let count = Poisson::new(mean).expect("positive mean").sample(rng) as usize;
    let lo_sq = r_lo * r_lo;
    let span = r_hi * r_hi - lo_sq;
    (0..count)
        .map(|_| (lo_sq + rng.random::<f64>() * span).sqrt())
        .collect()
}

/// i.i.d. CN(0, 1) channel vector: each entry has variance 1/2 per real
/// dimension, unit variance total.
pub fn draw_channel<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<Complex64> {
    let std = std::f64::consts::FRAC_1_SQRT_2;
    (0..m)
        .map(|_| {
            Complex64::new(
                rng.sample::<f64, _>(rand_distr::StandardNormal) * std,
                rng.sample::<f64, _>(rand_distr::StandardNormal) * std,
            )
        })
        .collect()
}

/// Isotropic unit vector orthogonal to `unit` (which must be unit norm).
fn isotropic_orthogonal<R: Rng + ?Sized>(unit: &[Complex64], rng: &mut R) -> Vec<Complex64> {
    loop {
        let g = draw_channel(unit.len(), rng);
        let proj = inner(&g, unit);
        let mut v: Vec<Complex64> = g
            .iter()
            .zip(unit)
            .map(|(&gi, &ui)| gi - proj * ui)
            .collect();
        let n = norm(&v);
        if n > 1e-9 {
            for x in &mut v {
                *x /= n;
            }
            return v;
        }
    }
}

/// Quantized direction and quantization error under the quantization cell
/// approximation.
#[derive(Debug, Clone)]
pub struct QcaQuantization {
    /// Unit-norm quantized channel direction.
    pub direction: Vec<Complex64>,
    /// sin^2 of the angle between the true and quantized directions.
    pub sin2_error: f64,
}

/// QCA feedback model: draws sin^2(phi) from the cdf `2^B x^(M-1)` on
/// [0, delta] by inverse transform (`x = delta U^(1/(M-1))`), then rotates the
/// true direction by phi within the plane spanned by the direction and an
/// isotropic orthogonal vector. Requires M >= 2.
pub fn quantize_qca<R: Rng + ?Sized>(
    h: &[Complex64],
    bits: u32,
    rng: &mut R,
) -> Result<QcaQuantization> {
    let m = h.len();
    if m < 2 {
        return Err(Error::InvalidSimConfig(
            "QCA quantization needs M >= 2".into(),
        ));
    }
    let delta = 2f64.powf(-f64::from(bits) / (m as f64 - 1.0));
    let u: f64 = rng.random();
    let sin2 = delta * u.powf(1.0 / (m as f64 - 1.0));
    let (sin_phi, cos_phi) = (sin2.sqrt(), (1.0 - sin2).sqrt());

    let h_bar = scale(h, 1.0 / norm(h));
    let orth = isotropic_orthogonal(&h_bar, rng);
    let direction: Vec<Complex64> = h_bar
        .iter()
        .zip(&orth)
        .map(|(&hb, &o)| hb * cos_phi + o * sin_phi)
        .collect();
    Ok(QcaQuantization {
        direction,
        sin2_error: sin2,
    })
}

/// Fresh random codebook of 2^bits isotropic unit codewords.
pub fn random_codebook<R: Rng + ?Sized>(
    m: usize,
    bits: u32,
    rng: &mut R,
) -> Result<Vec<Vec<Complex64>>> {
    if bits > MAX_RVQ_BITS {
        return Err(Error::CodebookTooLarge {
            bits,
            max: MAX_RVQ_BITS,
        });
    }
    let n = 1usize << bits;
    Ok((0..n)
        .map(|_| {
            let g = draw_channel(m, rng);
            scale(&g, 1.0 / norm(&g))
        })
        .collect())
}

/// Random vector quantization: the codeword closest to the channel direction
/// in chordal distance, i.e. the argmax of `|h_bar . v*|^2`.
pub fn quantize_rvq(h: &[Complex64], codebook: &[Vec<Complex64>]) -> Vec<Complex64> {
    let h_bar = scale(h, 1.0 / norm(h));
    let best = codebook
        .iter()
        .max_by(|a, b| {
            inner(&h_bar, a)
                .norm_sqr()
                .total_cmp(&inner(&h_bar, b).norm_sqr())
        })
        .expect("non-empty codebook");
    best.clone()
}

/// Beta(1, n) draw by inverse cdf; degenerates to the point mass at 1 for
/// n = 0 (a one-dimensional orthogonal complement).
pub fn beta_1_n<R: Rng + ?Sized>(n: usize, rng: &mut R) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let u: f64 = rng.random();
    1.0 - (1.0 - u).powf(1.0 / n as f64)
}

/// One normalized intra-cluster interference draw via the quantization chain:
/// `X ~ Gamma(M-1, delta)`, `Y = X Beta(1, M-2) ~ Exp(delta)`, summed over the
/// K-1 unintended streams. Zero for perfect CSI or a single stream.
pub fn sample_intra_cluster<R: Rng + ?Sized>(
    m: usize,
    k: usize,
    delta: f64,
    rng: &mut R,
) -> f64 {
    if delta == 0.0 || k <= 1 {
        return 0.0;
    }
    debug_assert!(m >= 2);
    let x_dist = Gamma::new(m as f64 - 1.0, delta).expect("valid gamma");
    (0..k - 1)
        .map(|_| x_dist.sample(rng) * beta_1_n(m - 2, rng))
        .sum()
}

/// One inter-cluster fading mark: `|| h W ||^2` for a K-column precoder, the
/// sum of K unit-mean exponentials, sampled directly as Gamma(K, 1).
pub fn sample_field_mark<R: Rng + ?Sized>(k: usize, rng: &mut R) -> f64 {
    Gamma::new(k as f64, 1.0)
        .expect("valid gamma")
        .sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::stats::{ks_pvalue, ks_statistic};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_field_at_zero_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            assert!(sample_ppp(0.0, 10.0, &mut rng).is_empty());
        }
    }

    #[test]
    fn field_count_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let draws = 10_000;
        let (lambda, r) = (0.1, 10.0);
        let mean_count: f64 = (0..draws)
            .map(|_| sample_ppp(lambda, r, &mut rng).len() as f64)
            .sum::<f64>()
            / draws as f64;
        let want = lambda * std::f64::consts::PI * r * r;
        let stderr = (want / draws as f64).sqrt();
        assert!(
            (mean_count - want).abs() < 3.0 * stderr,
            "mean {mean_count} vs {want} (3se = {})",
            3.0 * stderr
        );
    }

    #[test]
    fn field_distance_cdf() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = 10.0;
        let mut d: Vec<f64> = Vec::new();
        while d.len() < 50_000 {
            d.extend(sample_ppp(0.05, r, &mut rng));
        }
        d.truncate(50_000);
        d.sort_by(f64::total_cmp);
        let ks = ks_statistic(&d, |x| (x / r).powi(2));
        assert!(ks_pvalue(d.len(), ks) > 0.01);
    }

    #[test]
    fn channel_norm_mean_and_distribution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = 4;
        let n = 100_000;
        let mut norms: Vec<f64> = (0..n)
            .map(|_| crate::montecarlo::linalg::norm_sq(&draw_channel(m, &mut rng)))
            .collect();
        let mean = norms.iter().sum::<f64>() / n as f64;
        // ||h||^2 ~ Gamma(M, 1): variance M
        let stderr = (m as f64 / n as f64).sqrt();
        assert!((mean - m as f64).abs() < 3.0 * stderr);
        norms.sort_by(f64::total_cmp);
        let ks = ks_statistic(&norms, |x| crate::montecarlo::stats::erlang_cdf(m, 1.0, x));
        assert!(ks_pvalue(n, ks) > 0.01);
    }

    #[test]
    fn channel_draws_uncorrelated() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| draw_channel(1, &mut rng)[0].re).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        let lag1 = xs
            .windows(2)
            .map(|w| (w[0] - mean) * (w[1] - mean))
            .sum::<f64>()
            / ((n - 1) as f64 * var);
        assert!(lag1.abs() < 0.01, "lag-1 autocorrelation {lag1}");
    }

    #[test]
    fn qca_error_support_and_moment() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (m, bits) = (4, 8u32);
        let delta = 2f64.powf(-f64::from(bits) / 3.0);
        let n = 100_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let h = draw_channel(m, &mut rng);
            let q = quantize_qca(&h, bits, &mut rng).unwrap();
            assert!(q.sin2_error <= delta + 1e-15);
            // decomposition identity
            let h_bar = scale(&h, 1.0 / norm(&h));
            let cos2 = inner(&h_bar, &q.direction).norm_sqr();
            assert_relative_eq!(cos2 + q.sin2_error, 1.0, epsilon = 1e-12);
            sum += q.sin2_error;
        }
        // E[sin^2 phi] = delta (M-1)/M; var <= delta^2 -> 3 s.e. bound below
        let want = delta * 3.0 / 4.0;
        let se = delta / (n as f64).sqrt();
        assert!(
            (sum / n as f64 - want).abs() < 3.0 * se,
            "moment {} vs {want}",
            sum / n as f64
        );
    }

    #[test]
    fn rvq_single_codeword_and_determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let h = draw_channel(3, &mut rng);
        let cb = random_codebook(3, 0, &mut rng).unwrap();
        assert_eq!(cb.len(), 1);
        let q = quantize_rvq(&h, &cb);
        assert_eq!(q, cb[0]);

        let mut rng_a = ChaCha8Rng::seed_from_u64(77);
        let mut rng_b = ChaCha8Rng::seed_from_u64(77);
        let cb_a = random_codebook(3, 6, &mut rng_a).unwrap();
        let cb_b = random_codebook(3, 6, &mut rng_b).unwrap();
        assert_eq!(cb_a, cb_b);
    }

    #[test]
    fn rvq_codebook_guard() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(matches!(
            random_codebook(2, 21, &mut rng),
            Err(Error::CodebookTooLarge { .. })
        ));
    }

    #[test]
    fn rvq_error_tracks_qca_cell_model() {
        // The cell model packs each quantization cell perfectly, so its error
        // is stochastically smaller than a random codebook's. Exact moments:
        // E[sin^2]_RVQ / E[sin^2]_QCA = 1.888 at (M=2,B=4), 1.329 at (3,8),
        // 1.190 at (4,10), approaching 1 as M grows. Check the simulated
        // ratios against those values and their ordering.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let cases = [(2usize, 4u32, 1.8824), (3, 8, 1.3274), (4, 10, 1.1904)];
        let mut ratios = Vec::new();
        for &(m, bits, want) in &cases {
            let trials = 20_000;
            let mut rvq_sum = 0.0;
            let mut qca_sum = 0.0;
            for _ in 0..trials {
                let h = draw_channel(m, &mut rng);
                let cb = random_codebook(m, bits, &mut rng).unwrap();
                let q = quantize_rvq(&h, &cb);
                let h_bar = scale(&h, 1.0 / norm(&h));
                rvq_sum += 1.0 - inner(&h_bar, &q).norm_sqr();
                qca_sum += quantize_qca(&h, bits, &mut rng).unwrap().sin2_error;
            }
            let ratio = rvq_sum / qca_sum;
            assert!(
                (ratio / want - 1.0).abs() < 0.06,
                "RVQ/QCA mean error ratio {ratio} vs expected {want} at M={m}, B={bits}"
            );
            ratios.push(ratio);
        }
        assert!(ratios[0] > ratios[1] && ratios[1] > ratios[2]);
    }

    #[test]
    fn intra_cluster_chain_zero_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert_eq!(sample_intra_cluster(4, 1, 0.1, &mut rng), 0.0);
        assert_eq!(sample_intra_cluster(4, 4, 0.0, &mut rng), 0.0);
    }
}
