//! Small dense complex linear algebra for the beamforming path: inner
//! products, Gram matrices, and Gauss-Jordan inversion of K x K systems.
//! Cluster sizes stay in the single digits, so no blocking or pivot-scaling
//! heroics are needed beyond partial pivoting.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hermitian inner product `sum_i a_i conj(b_i)`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| x * y.conj())
        .sum()
}

/// Plain (bilinear) product `sum_i a_i b_i`, the row-times-column product a
/// receive channel applies to a beamforming vector.
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn norm_sq(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    norm_sq(a).sqrt()
}

pub fn scale(a: &[Complex64], s: f64) -> Vec<Complex64> {
    a.iter().map(|&x| x * s).collect()
}

/// In-place Gauss-Jordan inverse with partial pivoting of a K x K matrix in
/// row-major order. Fails with `SingularMatrix` when a pivot collapses
/// (relative magnitude below 1e-12, the condition-number guard).
pub fn invert(matrix: &[Complex64], k: usize) -> Result<Vec<Complex64>> {
    debug_assert_eq!(matrix.len(), k * k);
    let mut a = matrix.to_vec();
    let mut inv = vec![Complex64::new(0.0, 0.0); k * k];
    for i in 0..k {
        inv[i * k + i] = Complex64::new(1.0, 0.0);
    }
    let scale_ref = a
        .iter()
        .map(|x| x.norm())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    for col in 0..k {
        let (pivot_row, pivot_mag) = (col..k)
            .map(|r| (r, a[r * k + col].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty column");
        if pivot_mag < 1e-12 * scale_ref {
            return Err(Error::SingularMatrix);
        }
        if pivot_row != col {
            for j in 0..k {
                a.swap(col * k + j, pivot_row * k + j);
                inv.swap(col * k + j, pivot_row * k + j);
            }
        }
        let pivot = a[col * k + col];
        for j in 0..k {
            a[col * k + j] /= pivot;
            inv[col * k + j] /= pivot;
        }
        for r in 0..k {
            if r == col {
                continue;
            }
            let factor = a[r * k + col];
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..k {
                let t = a[col * k + j];
                a[r * k + j] -= factor * t;
                let t = inv[col * k + j];
                inv[r * k + j] -= factor * t;
            }
        }
    }
    Ok(inv)
}

/// Zero-forcing beamformers from K quantized channel rows (K <= M):
/// normalized columns of the Moore-Penrose pseudoinverse
/// `W = H^H (H H^H)^(-1)`, so that `h_hat_k . w_j = 0` for k != j.
pub fn zf_beamformers(rows: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
    let k = rows.len();
    assert!(k >= 1, "need at least one row");
    let m = rows[0].len();
    assert!(k <= m, "more streams than antennas");

    // Gram G = H H^H, G[i][j] = <row_i, row_j>
    let mut gram = vec![Complex64::new(0.0, 0.0); k * k];
    for i in 0..k {
        for j in 0..k {
            gram[i * k + j] = inner(&rows[i], &rows[j]);
        }
    }
    let ginv = invert(&gram, k)?;

    // w_j = H^H y_j with y_j the j-th column of G^-1; then normalize
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let mut w = vec![Complex64::new(0.0, 0.0); m];
        for (i, row) in rows.iter().enumerate() {
            let y = ginv[i * k + j];
            for (wi, &ri) in w.iter_mut().zip(row) {
                *wi += ri.conj() * y;
            }
        }
        let n = norm(&w);
        if n == 0.0 {
            return Err(Error::SingularMatrix);
        }
        out.push(scale(&w, 1.0 / n));
    }
    Ok(out)
}
