//! Analytics-versus-simulation validation runs: evaluates the closed-form
//! outage against the Monte Carlo estimate over a parameter grid and renders
//! a deterministic pass/fail report.

use serde::Serialize;

use crate::analytics::outage_all;
use crate::error::Result;
use crate::montecarlo::{estimate, Metric, MetricEstimate, SimConfig};
use crate::params::{db_to_linear, FeedbackBits, NetworkParams};

/// Default absolute tolerance for outage agreement.
pub const DEFAULT_OUTAGE_TOL: f64 = 1.5e-2;

/// One labeled grid point to validate.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationPoint {
    pub label: String,
    pub params: NetworkParams,
}

/// Result of one grid point.
#[derive(Debug, Clone, Serialize)]
pub struct PointOutcome {
    pub label: String,
    pub lambda: f64,
    pub analytic: f64,
    pub estimate: MetricEstimate,
    pub abs_gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Full validation report; `pass` only if every point passed.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub trials: usize,
    pub base_tolerance: f64,
    pub points: Vec<PointOutcome>,
    pub pass: bool,
}

impl ValidationReport {
    /// Stable text rendering: byte-identical for identical inputs, with no
    /// timing or worker-count dependence.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("outage validation report\n");
        out.push_str(&format!(
            "seed={} trials={} base_tol={:.3e}\n",
            self.seed, self.trials, self.base_tolerance
        ));
        out.push_str("label,lambda,analytic,montecarlo,half_width,abs_gap,tolerance,status\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{:.6e},{:.9},{:.9},{:.9},{:.9},{:.9},{}\n",
                p.label,
                p.lambda,
                p.analytic,
                p.estimate.value,
                p.estimate.half_width,
                p.abs_gap,
                p.tolerance,
                if p.pass { "PASS" } else { "FAIL" }
            ));
        }
        out.push_str(if self.pass {
            "overall: PASS\n"
        } else {
            "overall: FAIL\n"
        });
        out
    }
}

/// The default grid: the outage-vs-density comparison at alpha = 4,
/// d = 1.5, beta = 1 dB, SNR = 20 dB across the antenna/bit configurations
/// (M=K, B) in {(2,6), (4,10), (4,inf), (1,-)} and
/// lambda in {1e-3, 1e-2, 5e-2}.
pub fn default_outage_grid() -> Vec<ValidationPoint> {
    let configs: [(usize, FeedbackBits, &str); 4] = [
        (2, FeedbackBits::Finite(6), "m2_b6"),
        (4, FeedbackBits::Finite(10), "m4_b10"),
        (4, FeedbackBits::Infinite, "m4_binf"),
        (1, FeedbackBits::Infinite, "siso"),
    ];
    let mut points = Vec::new();
    for (m, bits, name) in configs {
        for lambda in [1e-3, 1e-2, 5e-2] {
            let params =
                NetworkParams::symmetric(lambda, 4.0, m, m, bits, db_to_linear(1.0), 1.5, 1.0, 0.0)
                    .with_snr_db(20.0);
            points.push(ValidationPoint {
                label: format!("{name}_lam{lambda:e}"),
                params,
            });
        }
    }
    points
}

/// Runs the Monte Carlo engine against the closed-form outage on each point.
///
/// The per-point tolerance auto-relaxes to `max(base_tol, 3 half_width)` so
/// that small trial counts report wide-confidence passes instead of noise
/// failures.
pub fn run_outage_validation(
    points: &[ValidationPoint],
    trials: usize,
    seed: u64,
    workers: Option<usize>,
    base_tol: f64,
) -> Result<ValidationReport> {
    let mut outcomes = Vec::with_capacity(points.len());
    let mut all_pass = true;
    for point in points {
        let analytic_per_user = outage_all(&point.params)?;
        let analytic = analytic_per_user.per_user.iter().sum::<f64>()
            / analytic_per_user.per_user.len() as f64;
        let mut cfg = SimConfig::for_params(&point.params, trials, seed);
        cfg.workers = workers;
        let est = estimate(&point.params, &cfg, Metric::Outage)?;
        let abs_gap = (est.value - analytic).abs();
        let tolerance = base_tol.max(3.0 * est.half_width);
        let pass = abs_gap <= tolerance;
        all_pass &= pass;
        outcomes.push(PointOutcome {
            label: point.label.clone(),
            lambda: point.params.lambda,
            analytic,
            estimate: est,
            abs_gap,
            tolerance,
            pass,
        });
    }
    Ok(ValidationReport {
        seed,
        trials,
        base_tolerance: base_tol,
        points: outcomes,
        pass: all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_is_deterministic_and_relaxes_tolerance() {
        let grid = &default_outage_grid()[..2];
        let a = run_outage_validation(grid, 1000, 5, Some(2), DEFAULT_OUTAGE_TOL).unwrap();
        let b = run_outage_validation(grid, 1000, 5, Some(1), DEFAULT_OUTAGE_TOL).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        // 1000 trials: half-widths around 1e-2, so tolerances must have grown
        assert!(a
            .points
            .iter()
            .any(|p| p.tolerance > DEFAULT_OUTAGE_TOL));
        assert!(a.pass, "small-trial run should pass with relaxed tolerance");
    }

    #[test]
    fn grid_covers_all_configs_and_densities() {
        let grid = default_outage_grid();
        assert_eq!(grid.len(), 12);
        assert!(grid.iter().all(|p| p.params.validate().is_ok()));
    }
}
