//! Deterministic reductions and the statistical machinery shared by the
//! estimator and the distributional test suites.

/// Pairwise summation in fixed index order: the result depends only on the
/// slice contents, never on worker count or scheduling.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Sample mean and 95% normal-approximation confidence half-width.
pub fn mean_and_half_width(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    assert!(n >= 2, "need at least two samples");
    let mean = pairwise_sum(xs) / n as f64;
    let sq: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n as f64 - 1.0);
    (mean, 1.96 * (var / n as f64).sqrt())
}

/// One-sample Kolmogorov-Smirnov statistic against a reference cdf.
/// `sorted` must be ascending.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let lo = f - i as f64 / n;
        let hi = (i as f64 + 1.0) / n - f;
        d = d.max(lo).max(hi);
    }
    d
}

/// Asymptotic Kolmogorov p-value with the Stephens small-sample correction.
/// Uses the dual series: the theta-function form for small lambda (where the
/// alternating series loses all precision) and the alternating form otherwise.
pub fn ks_pvalue(n: usize, d: f64) -> f64 {
    let sqrt_n = (n as f64).sqrt();
    let lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    if lambda < 0.755 {
        if lambda <= 0.0 {
            return 1.0;
        }
        let mut cdf = 0.0;
        for j in 1..=20 {
            let a = f64::from(2 * j - 1) * std::f64::consts::PI;
            cdf += (-a * a / (8.0 * lambda * lambda)).exp();
        }
        cdf *= (2.0 * std::f64::consts::PI).sqrt() / lambda;
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let mut p = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = 2.0 * (-2.0 * jf * jf * lambda * lambda).exp();
        p += if j % 2 == 1 { term } else { -term };
        if term < 1e-12 {
            break;
        }
    }
    p.clamp(0.0, 1.0)
}

/// cdf of the unit-rate exponential.
pub fn exp_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        1.0 - (-x).exp()
    }
}

/// cdf of Beta(1, n): `1 - (1-x)^n` on [0, 1].
pub fn beta_1_n_cdf(n: usize, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        1.0 - (1.0 - x).powi(n as i32)
    }
}

/// cdf of Gamma(shape, scale) for integer shape (Erlang):
/// `1 - e^(-y) sum_{i<shape} y^i / i!` with `y = x / scale`.
pub fn erlang_cdf(shape: usize, scale: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let y = x / scale;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for i in 1..shape {
        term *= y / i as f64;
        sum += term;
    }
    1.0 - (-y).exp() * sum
}
