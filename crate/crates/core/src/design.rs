//! Relaxed G-optimal designs.
//!
//! For a design `w` on the simplex over arms `a_1..a_K ⊂ ℝᵖ` the covariance is
//! `Σ(w) = Σ_k w_k a_k a_kᵀ` and the objective is the maximum leverage
//! `h(w) = max_k a_kᵀ Σ(w)⁻¹ a_k`. At the optimum `h = p`, and the product of
//! an optimal node-level design with itself is optimal over the lifted
//! edge-arms, where `h = p²`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{GbbError, Result};
use crate::linalg::SpdFactor;

/// Weights on the simplex over an indexed arm set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignDistribution {
    weights: Vec<f64>,
    /// Weights at or below this are reported as outside the support.
    pub support_threshold: f64,
}

pub const DEFAULT_SUPPORT_THRESHOLD: f64 = 1e-6;

impl DesignDistribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(GbbError::InvalidDistribution("no weights".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
            return Err(GbbError::InvalidDistribution(format!("weight {w} is negative or not finite")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(GbbError::InvalidDistribution(format!("weights sum to {total}")));
        }
        Ok(DesignDistribution { weights, support_threshold: DEFAULT_SUPPORT_THRESHOLD })
    }

    /// Normalizes non-negative masses onto the simplex.
    pub fn from_masses(masses: Vec<f64>) -> Result<Self> {
        let total: f64 = masses.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(GbbError::InvalidDistribution(format!("total mass {total}")));
        }
        Self::new(masses.into_iter().map(|m| m / total).collect())
    }

    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(GbbError::InvalidDistribution("no weights".into()));
        }
        Self::new(vec![1.0 / len as f64; len])
    }

    pub fn point_mass(len: usize, index: usize) -> Result<Self> {
        if index >= len {
            return Err(GbbError::IndexOutOfRange { index, len });
        }
        let mut w = vec![0.0; len];
        w[index] = 1.0;
        Self::new(w)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&i| self.weights[i] > self.support_threshold).collect()
    }

    /// Cumulative weights, last entry pinned to 1.
    pub fn cdf(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out: Vec<f64> = self
            .weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        if let Some(last) = out.last_mut() {
            *last = 1.0;
        }
        out
    }
}

/// Result of a design solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub distribution: DesignDistribution,
    /// `h` at the returned design.
    pub objective: f64,
    pub iterations: usize,
    /// `objective − p`; zero at the exact optimum.
    pub certificate_gap: f64,
    /// Ambient dimension `p`.
    pub dimension: usize,
    /// Whether any covariance solve needed a diagonal jitter.
    pub jittered: bool,
}

impl DesignReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn check_arms(arms: &[DVector<f64>], dist: &DesignDistribution) -> Result<usize> {
    let p = arms
        .first()
        .map(|a| a.len())
        .ok_or_else(|| GbbError::InvalidSize("arm list is empty".into()))?;
    if let Some(bad) = arms.iter().find(|a| a.len() != p) {
        return Err(GbbError::DimensionMismatch { expected: p, got: bad.len() });
    }
    if dist.len() != arms.len() {
        return Err(GbbError::DimensionMismatch { expected: arms.len(), got: dist.len() });
    }
    Ok(p)
}

/// `Σ(w) = Σ_k w_k a_k a_kᵀ`
pub fn covariance(arms: &[DVector<f64>], dist: &DesignDistribution) -> Result<DMatrix<f64>> {
    let p = check_arms(arms, dist)?;
    let mut cov = DMatrix::zeros(p, p);
    for (a, &w) in arms.iter().zip(dist.weights()) {
        if w > 0.0 {
            cov.ger(w, a, a, 1.0);
        }
    }
    Ok(cov)
}

/// Maximum leverage under the design covariance; `+∞` when the covariance
/// is numerically singular.
pub fn h_value(arms: &[DVector<f64>], dist: &DesignDistribution) -> Result<f64> {
    let cov = covariance(arms, dist)?;
    match SpdFactor::new(&cov) {
        Ok(f) => Ok(arms.iter().map(|a| f.inv_quad(a)).fold(f64::NEG_INFINITY, f64::max)),
        Err(_) => Ok(f64::INFINITY),
    }
}

/// `f_𝒵(A) = max_z zᵀ A⁻¹ z`; errors on a singular `A`.
pub fn f_z(edge_arms: &[DVector<f64>], a: &DMatrix<f64>) -> Result<f64> {
    let f = SpdFactor::new(a)?;
    Ok(max_leverage(edge_arms, &f).1)
}

/// Index (lowest on ties) and value of the largest `vᵀ A⁻¹ v`.
pub(crate) fn max_leverage(vectors: &[DVector<f64>], f: &SpdFactor) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in vectors.iter().enumerate() {
        let l = f.inv_quad(v);
        if l > best.1 {
            best = (i, l);
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrankWolfeOptions {
    /// Stop once `h ≤ p (1 + tol)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FrankWolfeOptions {
    fn default() -> Self {
        FrankWolfeOptions { tol: 1e-2, max_iter: 100_000 }
    }
}

/// Frank–Wolfe on the simplex for the relaxed G-allocation.
///
/// Starts from uniform weights. Each iteration moves toward the point mass on
/// the max-leverage arm with the exact line-search step of the equivalent
/// D-criterion, `γ = (ℓ/p − 1)/(ℓ − 1)`. Stops on the Kiefer–Wolfowitz
/// certificate `ℓ ≤ p(1 + tol)`.
pub fn frank_wolfe_design(arms: &[DVector<f64>], opts: FrankWolfeOptions) -> Result<DesignReport> {
    if !(opts.tol > 0.0) {
        return Err(GbbError::Domain(format!("tol = {} must be positive", opts.tol)));
    }
    let mut weights = DVector::from_element(arms.len(), 1.0 / arms.len().max(1) as f64);
    let p = check_arms(arms, &DesignDistribution::uniform(arms.len())?)?;
    let pf = p as f64;
    let mut jittered = false;

    let mut iter = 0;
    loop {
        let dist = DesignDistribution { weights: weights.as_slice().to_vec(), support_threshold: DEFAULT_SUPPORT_THRESHOLD };
        let cov = covariance(arms, &dist)?;
        let factor = if iter == 0 {
            // uniform over a spanning set must be invertible
            SpdFactor::new(&cov).map_err(|_| GbbError::RankDeficient { rank: 0, dim: p })?
        } else {
            SpdFactor::with_jitter(&cov)?
        };
        jittered |= factor.jittered();
        let (best, lev) = max_leverage(arms, &factor);

        let done = lev <= pf * (1.0 + opts.tol);
        if done || iter >= opts.max_iter {
            let total = weights.sum();
            let dist = DesignDistribution::new(weights.iter().map(|w| w / total).collect())?;
            let report = DesignReport {
                distribution: dist,
                objective: lev,
                iterations: iter,
                certificate_gap: lev - pf,
                dimension: p,
                jittered,
            };
            return if done { Ok(report) } else { Err(GbbError::Convergence(Box::new(report))) };
        }

        let step = if lev > pf {
            (lev / pf - 1.0) / (lev - 1.0)
        } else {
            2.0 / (iter as f64 + 2.0)
        };
        weights *= 1.0 - step;
        weights[best] += step;
        iter += 1;
    }
}

/// `λ_(a,b) = μ_a μ_b` over the `K²` grid indexed `a·K + b`.
pub fn product_distribution(mu: &DesignDistribution) -> DesignDistribution {
    let w = mu.weights();
    let mut out = Vec::with_capacity(w.len() * w.len());
    for &a in w {
        for &b in w {
            out.push(a * b);
        }
    }
    let total: f64 = out.iter().sum();
    DesignDistribution {
        weights: out.into_iter().map(|x| x / total).collect(),
        support_threshold: mu.support_threshold * mu.support_threshold,
    }
}

/// Smallest eigenvalue of `(1/N) Σ z zᵀ`, clamped at zero.
pub fn min_eigenvalue_unweighted(arms: &[DVector<f64>]) -> Result<f64> {
    let n = arms.len();
    let cov = covariance(arms, &DesignDistribution::uniform(n)?)?;
    let eig = cov.symmetric_eigen();
    let top = eig.eigenvalues.amax();
    let low = eig.eigenvalues.min();
    // eigen-solver noise around a true zero
    if low <= 1e-12 * top.max(f64::MIN_POSITIVE) {
        return Ok(0.0);
    }
    Ok(low)
}

/// Burn-in round count `t₀ = 2 L p log(2p/δ) / ν_min` with `L = max ‖z‖²`
/// and `p` the edge-arm dimension.
pub fn burn_in_rounds(edge_arms: &[DVector<f64>], delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(GbbError::Domain(format!("delta = {delta} not in (0, 1)")));
    }
    let p = edge_arms
        .first()
        .map(|z| z.len())
        .ok_or_else(|| GbbError::InvalidSize("arm list is empty".into()))? as f64;
    let l = edge_arms.iter().map(|z| z.norm_squared()).fold(0.0, f64::max);
    let nu = min_eigenvalue_unweighted(edge_arms)?;
    if nu == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 * l * p * (2.0 * p / delta).ln() / nu)
}
