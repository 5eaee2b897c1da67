//! Bilinear reward oracle.

use std::io::Read;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::arms::{read_numeric_rows, vec_matrix, NodeArmSet};
use crate::error::{GbbError, Result};
use crate::graph::Graph;

/// The unknown matrix `M★` together with its cached `θ★ = vec(M★)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearParameter {
    matrix: DMatrix<f64>,
    theta: DVector<f64>,
}

impl BilinearParameter {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(GbbError::DimensionMismatch { expected: matrix.nrows(), got: matrix.ncols() });
        }
        if matrix.nrows() == 0 {
            return Err(GbbError::InvalidSize("parameter matrix is empty".into()));
        }
        let theta = vec_matrix(&matrix);
        Ok(BilinearParameter { matrix, theta })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn theta(&self) -> &DVector<f64> {
        &self.theta
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..i).all(|j| (self.matrix[(i, j)] - self.matrix[(j, i)]).abs() <= tol))
    }

    /// Reads a `d × d` matrix, one row per CSV line.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let rows = read_numeric_rows(reader)?;
        let d = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(GbbError::DimensionMismatch { expected: d, got: bad.len() });
        }
        Self::new(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

/// Reads `β` from a single-row CSV.
pub fn read_beta_csv<R: Read>(reader: R) -> Result<DVector<f64>> {
    let rows = read_numeric_rows(reader)?;
    match rows.as_slice() {
        [row] => Ok(DVector::from_column_slice(row)),
        _ => Err(GbbError::Parse(format!("beta CSV must have exactly one row, got {}", rows.len()))),
    }
}

/// `M★` with entry (1, 1) equal to 2 and zeros elsewhere.
pub fn soare_parameter(d: usize) -> Result<BilinearParameter> {
    if d < 2 {
        return Err(GbbError::InvalidSize(format!("need d >= 2, got {d}")));
    }
    let mut m = DMatrix::zeros(d, d);
    m[(0, 0)] = 2.0;
    BilinearParameter::new(m)
}

/// `M + Mᵀ`: the symmetric parameter whose undirected-pair rewards
/// reproduce the directed global reward of a non-symmetric `M`.
pub fn symmetrize(m: &DMatrix<f64>) -> Result<BilinearParameter> {
    if !m.is_square() {
        return Err(GbbError::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
    }
    BilinearParameter::new(m + m.transpose())
}

/// Block matrix `[[M, β], [0, 0]]` in dimension `d + 1`. Paired with
/// [`augment_arm`], it folds the linear term `xᵀβ` into the bilinear reward.
pub fn augment(m: &DMatrix<f64>, beta: &DVector<f64>) -> Result<BilinearParameter> {
    if !m.is_square() {
        return Err(GbbError::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
    }
    let d = m.nrows();
    if beta.len() != d {
        return Err(GbbError::DimensionMismatch { expected: d, got: beta.len() });
    }
    let mut out = DMatrix::zeros(d + 1, d + 1);
    out.view_mut((0, 0), (d, d)).copy_from(m);
    out.view_mut((0, d), (d, 1)).copy_from(beta);
    BilinearParameter::new(out)
}

/// `(xᵀ, 1)ᵀ`
pub fn augment_arm(x: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::from_element(x.len() + 1, 1.0);
    out.rows_mut(0, x.len()).copy_from(x);
    out
}

/// Augments every arm of a set.
pub fn augment_arm_set(arms: &NodeArmSet) -> Result<NodeArmSet> {
    NodeArmSet::new(arms.arms().iter().map(augment_arm).collect())
}

/// `xᵀ M★ x'`
pub fn expected_reward(x: &DVector<f64>, x_prime: &DVector<f64>, param: &BilinearParameter) -> Result<f64> {
    let d = param.dim();
    for v in [x, x_prime] {
        if v.len() != d {
            return Err(GbbError::DimensionMismatch { expected: d, got: v.len() });
        }
    }
    Ok((x.transpose() * param.matrix() * x_prime)[(0, 0)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum NoiseDistribution {
    #[default]
    Gaussian,
}

/// Zero-mean noise of scale `σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub sigma: f64,
    pub distribution: NoiseDistribution,
}

impl NoiseModel {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(GbbError::Domain(format!("sigma = {sigma} must be finite and >= 0")));
        }
        Ok(NoiseModel { sigma, distribution: NoiseDistribution::Gaussian })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.distribution {
            NoiseDistribution::Gaussian => {
                if self.sigma == 0.0 {
                    0.0
                } else {
                    Normal::new(0.0, self.sigma).expect("sigma validated").sample(rng)
                }
            }
        }
    }
}

/// Expected reward plus one noise draw.
pub fn sample_reward<R: Rng + ?Sized>(
    x: &DVector<f64>,
    x_prime: &DVector<f64>,
    param: &BilinearParameter,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<f64> {
    Ok(expected_reward(x, x_prime, param)? + noise.sample(rng))
}

/// Sum of expected rewards over all directed edges for a joint arm
/// (one node-arm index per node).
pub fn global_reward(
    allocation: &[usize],
    graph: &Graph,
    arms: &NodeArmSet,
    param: &BilinearParameter,
) -> Result<f64> {
    if allocation.len() != graph.n_nodes() {
        return Err(GbbError::DimensionMismatch { expected: graph.n_nodes(), got: allocation.len() });
    }
    if let Some(&bad) = allocation.iter().find(|&&a| a >= arms.len()) {
        return Err(GbbError::IndexOutOfRange { index: bad, len: arms.len() });
    }
    let mut total = 0.0;
    for &(i, j) in graph.edges() {
        total += expected_reward(arms.arm(allocation[i]), arms.arm(allocation[j]), param)?;
    }
    Ok(total)
}

/// Parameter and noise bundled as the learner's reward oracle.
#[derive(Debug, Clone)]
pub struct Environment {
    pub param: BilinearParameter,
    pub noise: NoiseModel,
}

impl Environment {
    pub fn new(param: BilinearParameter, noise: NoiseModel) -> Self {
        Environment { param, noise }
    }

    /// Noisy reward of the edge-arm `z` (already lifted), `⟨z, θ★⟩ + η`.
    pub fn pull_lifted<R: Rng + ?Sized>(&self, z: &DVector<f64>, rng: &mut R) -> f64 {
        z.dot(self.param.theta()) + self.noise.sample(rng)
    }
}
