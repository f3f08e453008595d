//! Gauss hypergeometric function 2F1 by power series and Pfaff transformation.

use crate::error::{Error, Result};

const MAX_TERMS: usize = 20_000;
const REL_TOL: f64 = 1e-14;

/// Gauss hypergeometric function 2F1(a, b; c; z).
///
/// The power series is used on 0 <= z < 1; negative arguments are mapped into
/// [0, 1) with the Pfaff transformation
/// `2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))`.
/// Arguments z >= 1 are outside the supported domain.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if c <= 0.0 && c == c.floor() {
        return Err(Error::PoleAtC { c });
    }
    if z >= 1.0 {
        return Err(Error::DomainNotSupported { z });
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z < 0.0 {
        let w = z / (z - 1.0); // in (0, 1)
        let transformed = series_2f1(a, c - b, c, w)?;
        return Ok((1.0 - z).powf(-a) * transformed);
    }
    series_2f1(a, b, c, z)
}

fn series_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / (c + nf) * z / (nf + 1.0);
        sum += term;
        if term == 0.0 || term.abs() <= REL_TOL * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence {
        achieved: term.abs(),
        required: REL_TOL * sum.abs(),
    })
}
