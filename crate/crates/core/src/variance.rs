//! Monte-Carlo estimates of `‖Var(A₁)‖`, the spectral norm of the variance
//! of the one-round design matrix `A₁ = Σ_{(i,j)∈E} z_ij z_ijᵀ` when every
//! node draws its arm i.i.d. from `μ`.
//!
//! Edges that share a node are dependent, so the variance grows faster on
//! concentrated graphs. A star grows like `m²` while a circle stays linear.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arms::{random_unit_arms, EdgeArmSet, NodeArmSet};
use crate::design::{frank_wolfe_design, DesignDistribution, FrankWolfeOptions};
use crate::error::{GbbError, Result};
use crate::graph::{Graph, GraphKind};
use crate::linalg::{spectral_norm, symmetric_spectral_norm};

/// Relative tolerance of every power iteration in this module.
pub const POWER_TOL: f64 = 1e-8;
const POWER_MAX_ITER: usize = 100_000;

pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_BOOTSTRAP: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceEstimate {
    pub kind: GraphKind,
    pub m: usize,
    pub n_samples: usize,
    pub spectral_norm: f64,
    /// Bootstrap standard deviation of `spectral_norm`.
    pub std_error: f64,
}

/// Ceilings on the per-edge variance (`P`) and on the covariance of two
/// edges sharing their head node (`M`) or chained head-to-tail (`N`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceBoundSpec {
    pub p: f64,
    pub m: f64,
    pub n: f64,
}

impl VarianceBoundSpec {
    pub fn new(p: f64, m: f64, n: f64) -> Result<Self> {
        if [p, m, n].iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(GbbError::Domain(format!("bound constants must be >= 0, got ({p}, {m}, {n})")));
        }
        Ok(VarianceBoundSpec { p, m, n })
    }
}

fn draw_index<R: Rng + ?Sized>(cdf: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

/// Sample-specific stream so results do not depend on thread scheduling.
fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One draw of `A₁`.
pub fn sample_a1<R: Rng + ?Sized>(graph: &Graph, edge_arms: &EdgeArmSet, mu: &DesignDistribution, rng: &mut R) -> Result<DMatrix<f64>> {
    if mu.len() != edge_arms.n_node_arms() {
        return Err(GbbError::DimensionMismatch { expected: edge_arms.n_node_arms(), got: mu.len() });
    }
    let cdf = mu.cdf();
    let draw: Vec<usize> = (0..graph.n_nodes()).map(|_| draw_index(&cdf, rng)).collect();
    Ok(a1_for_draw(graph, edge_arms, &draw))
}

fn a1_for_draw(graph: &Graph, edge_arms: &EdgeArmSet, draw: &[usize]) -> DMatrix<f64> {
    let k = edge_arms.n_node_arms();
    let mut counts = vec![0u32; edge_arms.len()];
    for &(i, j) in graph.edges() {
        counts[draw[i] * k + draw[j]] += 1;
    }
    let p = edge_arms.dim();
    let mut a = DMatrix::zeros(p, p);
    for (idx, &c) in counts.iter().enumerate().filter(|(_, &c)| c > 0) {
        let z = edge_arms.vector(idx);
        a.ger(c as f64, z, z, 1.0);
    }
    a
}

/// Two-pass estimate `(1/N) Σ (A_k − Ā)²` of a matrix variance.
pub fn matrix_variance(samples: &[DMatrix<f64>]) -> DMatrix<f64> {
    cross_covariance(samples, samples)
}

/// `(1/N) Σ (A_k − Ā)(B_k − B̄)` for paired samples.
pub fn cross_covariance(a: &[DMatrix<f64>], b: &[DMatrix<f64>]) -> DMatrix<f64> {
    assert_eq!(a.len(), b.len(), "paired samples");
    let n = a.len() as f64;
    let mean = |xs: &[DMatrix<f64>]| xs.iter().fold(DMatrix::zeros(xs[0].nrows(), xs[0].ncols()), |acc, x| acc + x) / n;
    let (ma, mb) = (mean(a), mean(b));
    let mut acc = DMatrix::zeros(ma.nrows(), ma.ncols());
    for (x, y) in a.iter().zip(b) {
        acc += (x - &ma) * (y - &mb);
    }
    acc / n
}

/// `‖Var(A₁)‖` from `n_samples` draws, with a bootstrap error bar.
pub fn variance_norm(
    graph: &Graph,
    node_arms: &NodeArmSet,
    mu: &DesignDistribution,
    n_samples: usize,
    seed: u64,
) -> Result<VarianceEstimate> {
    variance_norm_with_bootstrap(graph, node_arms, mu, n_samples, DEFAULT_BOOTSTRAP, seed)
}

pub fn variance_norm_with_bootstrap(
    graph: &Graph,
    node_arms: &NodeArmSet,
    mu: &DesignDistribution,
    n_samples: usize,
    bootstrap: usize,
    seed: u64,
) -> Result<VarianceEstimate> {
    if n_samples < 2 {
        return Err(GbbError::Config(format!("need at least 2 samples, got {n_samples}")));
    }
    if mu.len() != node_arms.len() {
        return Err(GbbError::DimensionMismatch { expected: node_arms.len(), got: mu.len() });
    }
    let edge_arms = EdgeArmSet::new(node_arms.clone());
    let cdf = mu.cdf();
    let samples: Vec<DMatrix<f64>> = (0..n_samples as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = sample_rng(seed, k);
            let draw: Vec<usize> = (0..graph.n_nodes()).map(|_| draw_index(&cdf, &mut rng)).collect();
            a1_for_draw(graph, &edge_arms, &draw)
        })
        .collect();

    let n = n_samples as f64;
    let p = edge_arms.dim();
    let mean = samples.iter().fold(DMatrix::zeros(p, p), |acc, a| acc + a) / n;
    let deviations: Vec<DMatrix<f64>> = samples.iter().map(|a| a - &mean).collect();
    let squares: Vec<DMatrix<f64>> = deviations.par_iter().map(|d| d * d).collect();
    let variance = squares.iter().fold(DMatrix::zeros(p, p), |acc, s| acc + s) / n;
    let norm = symmetric_spectral_norm(&variance, POWER_TOL, POWER_MAX_ITER);

    // resample indices; with D = A − Ā, Var_s = mean_s(D²) − mean_s(D)²
    let std_error = if bootstrap >= 2 {
        let norms: Vec<f64> = (0..bootstrap as u64)
            .into_par_iter()
            .map(|b| {
                let mut rng = sample_rng(seed ^ 0xB007_5712_u64, b);
                let mut sq = DMatrix::zeros(p, p);
                let mut dev = DMatrix::zeros(p, p);
                for _ in 0..n_samples {
                    let k = rng.random_range(0..n_samples);
                    sq += &squares[k];
                    dev += &deviations[k];
                }
                sq /= n;
                dev /= n;
                let v = sq - &dev * &dev;
                symmetric_spectral_norm(&v, POWER_TOL, POWER_MAX_ITER)
            })
            .collect();
        let mean = norms.iter().sum::<f64>() / norms.len() as f64;
        (norms.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (norms.len() - 1) as f64).sqrt()
    } else {
        0.0
    };

    Ok(VarianceEstimate {
        kind: graph.kind(),
        m: graph.n_edges(),
        n_samples,
        spectral_norm: norm,
        std_error,
    })
}

/// `(slope, intercept)` of the least-squares line through `(x, y)`.
pub fn least_squares_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub kind: GraphKind,
    /// Slope of `log ‖Var(A₁)‖` against `log m`.
    pub slope: f64,
    pub intercept: f64,
    pub estimates: Vec<VarianceEstimate>,
}

/// Validates an `m` grid for a log-log fit: at least three distinct values
/// spanning a factor of 4 or more, all realizable by `kind`.
pub fn check_m_grid(kind: GraphKind, m_values: &[usize]) -> Result<()> {
    let mut distinct = m_values.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(GbbError::Config(format!("slope fit needs >= 3 distinct m values, got {}", distinct.len())));
    }
    let (lo, hi) = (distinct[0], distinct[distinct.len() - 1]);
    if hi < 4 * lo {
        return Err(GbbError::Config(format!("m grid spans {lo}..{hi}, less than a factor 4")));
    }
    if let Some(&bad) = distinct.iter().find(|&&m| kind.nodes_for_edges(m).is_none()) {
        return Err(GbbError::Config(format!("m = {bad} is not realizable by a {kind} graph")));
    }
    Ok(())
}

/// Growth exponent of `‖Var(A₁)‖` in `m` for one graph family, on `K`
/// random unit arms in `ℝᵈ` sampled from their G-optimal design.
pub fn scaling_slope(
    kind: GraphKind,
    m_values: &[usize],
    d: usize,
    k: usize,
    n_samples: usize,
    seed: u64,
) -> Result<SlopeFit> {
    check_m_grid(kind, m_values)?;
    let arms = random_unit_arms(k, d, seed)?;
    let mu = frank_wolfe_design(arms.arms(), FrankWolfeOptions::default())?.distribution;
    scaling_slope_with(kind, m_values, &arms, &mu, n_samples, seed)
}

/// [`scaling_slope`] on a caller-supplied arm set and design.
pub fn scaling_slope_with(
    kind: GraphKind,
    m_values: &[usize],
    arms: &NodeArmSet,
    mu: &DesignDistribution,
    n_samples: usize,
    seed: u64,
) -> Result<SlopeFit> {
    check_m_grid(kind, m_values)?;
    let mut estimates = Vec::with_capacity(m_values.len());
    for &m in m_values {
        let graph = Graph::with_edge_count(kind, m)?;
        estimates.push(variance_norm(&graph, arms, mu, n_samples, seed.wrapping_add(m as u64))?);
    }
    let x: Vec<f64> = estimates.iter().map(|e| (e.m as f64).ln()).collect();
    let y: Vec<f64> = estimates.iter().map(|e| e.spectral_norm.ln()).collect();
    let (slope, intercept) = least_squares_line(&x, &y);
    Ok(SlopeFit { kind, slope, intercept, estimates })
}

/// Upper bound on `‖Var(A₁)‖` for a graph family with `m` directed edges,
/// counting variance and covariance terms per family:
///
/// | kind     | bound                                          |
/// |----------|------------------------------------------------|
/// | star     | `mP + (n−1)(n−2)M + n(n−1)N`, `n = m/2 + 1`    |
/// | complete | `mP + n(n−1)(n−2)M + n(n−1)²N`, `n(n−1) = m`   |
/// | circle   | `mP + 2nM + 4nN`, `n = m/2`                    |
/// | matching | `mP + mN`                                      |
pub fn table1_bound(kind: GraphKind, m: usize, spec: &VarianceBoundSpec) -> Result<f64> {
    let n = kind
        .nodes_for_edges(m)
        .ok_or_else(|| GbbError::Config(format!("m = {m} is not realizable by a {kind} graph")))? as f64;
    let mf = m as f64;
    let VarianceBoundSpec { p, m: cm, n: cn } = *spec;
    Ok(match kind {
        GraphKind::Star => mf * p + (n - 1.0) * (n - 2.0) * cm + n * (n - 1.0) * cn,
        GraphKind::Complete => mf * p + n * (n - 1.0) * (n - 2.0) * cm + n * (n - 1.0) * (n - 1.0) * cn,
        GraphKind::Circle => mf * p + 2.0 * n * cm + 4.0 * n * cn,
        GraphKind::Matching => mf * p + mf * cn,
        GraphKind::Custom => unreachable!("custom graphs have no realizable m"),
    })
}

/// Monte-Carlo proxies for `P`, `M`, `N` on the path gadget `i - j - k`
/// with i.i.d. node draws from `μ`.
///
/// `P = ‖Var(A^{ij})‖`, `M = ‖Cov(A^{ij}, A^{ik})‖`, and
/// `N = max(‖Cov(A^{ij}, A^{jk})‖, ‖Cov(A^{ij}, A^{ji})‖)`; the second term
/// covers the reverse edge, which is the only dependent pair in a matching.
pub fn estimate_bound_constants(node_arms: &NodeArmSet, mu: &DesignDistribution, n_samples: usize, seed: u64) -> Result<VarianceBoundSpec> {
    if n_samples < 2 {
        return Err(GbbError::Config(format!("need at least 2 samples, got {n_samples}")));
    }
    if mu.len() != node_arms.len() {
        return Err(GbbError::DimensionMismatch { expected: node_arms.len(), got: mu.len() });
    }
    let edge_arms = EdgeArmSet::new(node_arms.clone());
    let k = node_arms.len();
    let cdf = mu.cdf();
    let outer = |idx: usize| {
        let z = edge_arms.vector(idx);
        z * z.transpose()
    };
    let mut ij = Vec::with_capacity(n_samples);
    let mut ik = Vec::with_capacity(n_samples);
    let mut jk = Vec::with_capacity(n_samples);
    let mut ji = Vec::with_capacity(n_samples);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_samples {
        let (xi, xj, xk) = (draw_index(&cdf, &mut rng), draw_index(&cdf, &mut rng), draw_index(&cdf, &mut rng));
        ij.push(outer(xi * k + xj));
        ik.push(outer(xi * k + xk));
        jk.push(outer(xj * k + xk));
        ji.push(outer(xj * k + xi));
    }
    let norm = |c: &DMatrix<f64>| spectral_norm(c, POWER_TOL, POWER_MAX_ITER);
    let p = symmetric_spectral_norm(&matrix_variance(&ij), POWER_TOL, POWER_MAX_ITER);
    let m = norm(&cross_covariance(&ij, &ik));
    let n = norm(&cross_covariance(&ij, &jk)).max(norm(&cross_covariance(&ij, &ji)));
    VarianceBoundSpec::new(p, m, n)
}
