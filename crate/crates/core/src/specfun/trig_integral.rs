//! Sine and cosine integrals Si(x) and Ci(x).
//!
//! Power series for small arguments; for large arguments both are obtained
//! from the complex exponential integral E1(ix), evaluated with the modified
//! Lentz continued fraction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::EULER_GAMMA;

const SERIES_CUTOFF: f64 = 2.0;
const EPS: f64 = 1e-16;
const MAX_ITER: usize = 400;

/// Sine integral Si(x) = int_0^x sin(t)/t dt for x >= 0.
pub fn sine_integral(x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::NonPositiveArgument { name: "x", value: x });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(si_ci(x).0)
}

/// Cosine integral Ci(x) = -int_x^inf cos(t)/t dt for x > 0.
pub fn cosine_integral(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::NonPositiveArgument { name: "x", value: x });
    }
    Ok(si_ci(x).1)
}

fn si_ci(x: f64) -> (f64, f64) {
    if x <= SERIES_CUTOFF {
        return si_ci_series(x);
    }
    // E1(ix) by modified Lentz; then Ci(x) = -Re E1(ix), Si(x) = pi/2 + Im E1(ix).
    let z = Complex64::new(0.0, x);
    let tiny = Complex64::new(1e-300, 0.0);
    let mut b = z + 1.0;
    let mut c = Complex64::new(1e300, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        if d.norm() == 0.0 {
            d = tiny;
        }
        c = b + a / c;
        if c.norm() == 0.0 {
            c = tiny;
        }
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < EPS {
            break;
        }
    }
    let e1 = h * Complex64::new(x.cos(), -x.sin());
    (std::f64::consts::FRAC_PI_2 + e1.im, -e1.re)
}

fn si_ci_series(x: f64) -> (f64, f64) {
    // Si: sum (-1)^n x^(2n+1) / ((2n+1)(2n+1)!)
    // Ci: gamma + ln x + sum (-1)^n x^(2n) / ((2n)(2n)!)
    let x2 = x * x;
    let mut si = 0.0;
    let mut pow = x;
    let mut fact = 1.0f64;
    for n in 0..40u32 {
        let k = 2 * n + 1;
        if n > 0 {
            pow *= -x2;
            fact *= f64::from(k - 1) * f64::from(k);
        }
        let t = pow / (fact * f64::from(k));
        si += t;
        if t.abs() < EPS {
            break;
        }
    }

    let mut ci_sum = 0.0;
    let mut pow = 1.0f64;
    let mut fact = 1.0f64;
    for n in 1..=40u32 {
        let k = 2 * n;
        pow *= -x2;
        fact *= f64::from(k - 1) * f64::from(k);
        let t = pow / (fact * f64::from(k));
        ci_sum += t;
        if t.abs() < EPS {
            break;
        }
    }
    (si, EULER_GAMMA + x.ln() + ci_sum)
}
