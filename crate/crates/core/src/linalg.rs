//! Dense linear-algebra helpers used across the crate.

use nalgebra::{DMatrix, DVector};

use crate::error::{GbbError, Result};

/// Relative pivot floor below which a covariance is treated as singular.
const SINGULAR_PIVOT: f64 = 1e-12;

/// Lower Cholesky factor of a symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub struct SpdFactor {
    lower: DMatrix<f64>,
    jittered: bool,
}

impl SpdFactor {
    /// Strict factorization; fails when a pivot is non-positive or negligible
    /// relative to the trace.
    pub fn new(a: &DMatrix<f64>) -> Result<Self> {
        let p = a.nrows();
        let scale = (a.trace() / p as f64).abs().max(f64::MIN_POSITIVE);
        let chol = nalgebra::Cholesky::new(a.clone()).ok_or(GbbError::Singular)?;
        let lower = chol.unpack();
        if lower.diagonal().iter().any(|&l| !(l * l > SINGULAR_PIVOT * scale)) {
            return Err(GbbError::Singular);
        }
        Ok(SpdFactor { lower, jittered: false })
    }

    /// Like [`SpdFactor::new`], retrying once with `1e-10·trace/p` added to the
    /// diagonal. The retry is recorded in [`SpdFactor::jittered`].
    pub fn with_jitter(a: &DMatrix<f64>) -> Result<Self> {
        match Self::new(a) {
            Ok(f) => Ok(f),
            Err(_) => {
                let p = a.nrows();
                let jitter = 1e-10 * a.trace().abs() / p as f64;
                let mut shifted = a.clone();
                for i in 0..p {
                    shifted[(i, i)] += jitter;
                }
                let chol = nalgebra::Cholesky::new(shifted).ok_or(GbbError::Singular)?;
                Ok(SpdFactor { lower: chol.unpack(), jittered: true })
            }
        }
    }

    pub fn jittered(&self) -> bool {
        self.jittered
    }

    pub fn dim(&self) -> usize {
        self.lower.nrows()
    }

    /// `L⁻¹ v`
    pub fn whiten(&self, v: &DVector<f64>) -> DVector<f64> {
        self.lower
            .solve_lower_triangular(v)
            .expect("cholesky factor has a positive diagonal")
    }

    /// `vᵀ A⁻¹ v`
    pub fn inv_quad(&self, v: &DVector<f64>) -> f64 {
        self.whiten(v).norm_squared()
    }

    /// `A⁻¹ v`
    pub fn solve(&self, v: &DVector<f64>) -> DVector<f64> {
        let y = self.whiten(v);
        self.lower
            .tr_solve_lower_triangular(&y)
            .expect("cholesky factor has a positive diagonal")
    }
}

/// Dominant eigenvalue magnitude of a symmetric matrix by power iteration,
/// stopping when the Rayleigh quotient moves less than `tol` relatively.
pub fn symmetric_spectral_norm(a: &DMatrix<f64>, tol: f64, max_iter: usize) -> f64 {
    let p = a.nrows();
    if p == 0 {
        return 0.0;
    }
    let scale = a.amax();
    if scale == 0.0 {
        return 0.0;
    }
    // fixed, non-degenerate starting direction
    let mut v = DVector::from_fn(p, |i, _| 1.0 + 0.1 * ((i * 7 + 3) % 11) as f64);
    v.normalize_mut();
    let mut estimate = 0.0;
    for _ in 0..max_iter {
        let w = a * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        // |λ| estimated by ‖Av‖ with ‖v‖ = 1
        let next = norm;
        v = w / norm;
        if (next - estimate).abs() <= tol * next {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// Largest singular value of an arbitrary square matrix, via `AᵀA`.
pub fn spectral_norm(a: &DMatrix<f64>, tol: f64, max_iter: usize) -> f64 {
    let gram = a.transpose() * a;
    symmetric_spectral_norm(&gram, tol * 0.5, max_iter).sqrt()
}

/// `(A + Aᵀ) / 2`
pub fn symmetric_part(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}
