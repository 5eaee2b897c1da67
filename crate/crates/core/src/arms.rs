//! Node-arm sets and the lifted edge-arm set.
//!
//! The lift uses column-major `vec`: `lift(x, x')[j * d + i] = x[i] * x'[j]`,
//! i.e. the columns of `x x'ᵀ` stacked. Equivalently `lift(x, x') = x' ⊗ x`.

use std::io::Read;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{GbbError, Result};

/// Column-stacked outer product `vec(x x'ᵀ)`.
pub fn lift(x: &DVector<f64>, x_prime: &DVector<f64>) -> Result<DVector<f64>> {
    if x.len() != x_prime.len() {
        return Err(GbbError::DimensionMismatch { expected: x.len(), got: x_prime.len() });
    }
    let d = x.len();
    let mut out = DVector::zeros(d * d);
    for j in 0..d {
        for i in 0..d {
            out[j * d + i] = x[i] * x_prime[j];
        }
    }
    Ok(out)
}

/// Column-major `vec` of a square matrix.
pub fn vec_matrix(m: &DMatrix<f64>) -> DVector<f64> {
    // nalgebra storage is already column-major
    DVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vec_matrix`] for a `d × d` matrix.
pub fn unvec(v: &DVector<f64>, d: usize) -> Result<DMatrix<f64>> {
    if v.len() != d * d {
        return Err(GbbError::DimensionMismatch { expected: d * d, got: v.len() });
    }
    Ok(DMatrix::from_column_slice(d, d, v.as_slice()))
}

/// A finite set of `K` node-arms spanning `ℝᵈ`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeArmSet {
    dim: usize,
    arms: Vec<DVector<f64>>,
}

impl NodeArmSet {
    pub fn new(arms: Vec<DVector<f64>>) -> Result<Self> {
        let dim = arms
            .first()
            .map(|a| a.len())
            .ok_or_else(|| GbbError::InvalidSize("arm set is empty".into()))?;
        if dim == 0 {
            return Err(GbbError::InvalidSize("arms must have positive dimension".into()));
        }
        if let Some(bad) = arms.iter().find(|a| a.len() != dim) {
            return Err(GbbError::DimensionMismatch { expected: dim, got: bad.len() });
        }
        if arms.iter().any(|a| a.iter().any(|v| !v.is_finite())) {
            return Err(GbbError::Domain("arm coordinates must be finite".into()));
        }
        if arms.len() < dim {
            return Err(GbbError::RankDeficient { rank: arms.len(), dim });
        }
        let stacked = DMatrix::from_fn(arms.len(), dim, |r, c| arms[r][c]);
        let svd = stacked.svd(false, false);
        let top = svd.singular_values.max();
        let rank = svd
            .singular_values
            .iter()
            .filter(|&&s| s > top * 1e-10 * (arms.len().max(dim) as f64))
            .count();
        if top == 0.0 || rank < dim {
            return Err(GbbError::RankDeficient { rank, dim });
        }
        Ok(NodeArmSet { dim, arms })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| DVector::from_column_slice(r)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of arms `K`.
    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    pub fn arms(&self) -> &[DVector<f64>] {
        &self.arms
    }

    pub fn arm(&self, index: usize) -> &DVector<f64> {
        &self.arms[index]
    }

    /// Reads one arm per CSV row, `d` columns, no header.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        Self::from_rows(&read_numeric_rows(reader)?)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        for arm in &self.arms {
            out.write_record(arm.iter().map(|v| format!("{v:?}")))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Numeric rows of a headerless CSV; blank lines and `#` comments are skipped.
pub(crate) fn read_numeric_rows<R: Read>(reader: R) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let row = record
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| GbbError::Parse(format!("'{f}': {e}"))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// View of one edge-arm with back-pointers into the node-arm set.
#[derive(Debug, Clone, Copy)]
pub struct EdgeArm<'a> {
    pub vector: &'a DVector<f64>,
    pub left_index: usize,
    pub right_index: usize,
}

/// All `K²` lifted edge-arms, indexed `(a, b) ↦ a·K + b`. Duplicate vectors
/// are kept as distinct entries.
#[derive(Debug, Clone)]
pub struct EdgeArmSet {
    base: NodeArmSet,
    vectors: Vec<DVector<f64>>,
}

impl EdgeArmSet {
    pub fn new(base: NodeArmSet) -> Self {
        let k = base.len();
        let mut vectors = Vec::with_capacity(k * k);
        for a in 0..k {
            for b in 0..k {
                vectors.push(lift(base.arm(a), base.arm(b)).expect("arms share a dimension"));
            }
        }
        EdgeArmSet { base, vectors }
    }

    pub fn base(&self) -> &NodeArmSet {
        &self.base
    }

    /// Node-arm count `K`.
    pub fn n_node_arms(&self) -> usize {
        self.base.len()
    }

    /// Edge-arm dimension `d²`.
    pub fn dim(&self) -> usize {
        self.base.dim() * self.base.dim()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn index(&self, left: usize, right: usize) -> usize {
        left * self.base.len() + right
    }

    pub fn pair(&self, index: usize) -> (usize, usize) {
        (index / self.base.len(), index % self.base.len())
    }

    pub fn vectors(&self) -> &[DVector<f64>] {
        &self.vectors
    }

    pub fn vector(&self, index: usize) -> &DVector<f64> {
        &self.vectors[index]
    }

    pub fn edge_arm(&self, left: usize, right: usize) -> EdgeArm<'_> {
        EdgeArm { vector: &self.vectors[self.index(left, right)], left_index: left, right_index: right }
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeArm<'_>> {
        let k = self.base.len();
        self.vectors
            .iter()
            .enumerate()
            .map(move |(idx, v)| EdgeArm { vector: v, left_index: idx / k, right_index: idx % k })
    }

    /// For every index, the other indices holding an identical vector.
    pub fn duplicate_groups(&self) -> Vec<Vec<usize>> {
        let n = self.vectors.len();
        let mut groups = vec![Vec::new(); n];
        for a in 0..n {
            for b in a + 1..n {
                if self.vectors[a] == self.vectors[b] {
                    groups[a].push(b);
                    groups[b].push(a);
                }
            }
        }
        groups
    }
}

/// Canonical basis of `ℝᵈ` plus `(cos ω, sin ω, 0, …, 0)`.
pub fn soare_arm_set(d: usize, omega: f64) -> Result<NodeArmSet> {
    if d < 2 {
        return Err(GbbError::InvalidSize(format!("need d >= 2, got {d}")));
    }
    if !(omega > 0.0 && omega <= std::f64::consts::FRAC_PI_2) {
        return Err(GbbError::Domain(format!("omega = {omega} not in (0, pi/2]")));
    }
    let mut arms: Vec<_> = (0..d).map(|i| DVector::from_fn(d, |r, _| if r == i { 1.0 } else { 0.0 })).collect();
    let mut extra = DVector::zeros(d);
    // exact at the right angle so the extra arm coincides with e₂
    let (c, s) = if omega == std::f64::consts::FRAC_PI_2 { (0.0, 1.0) } else { (omega.cos(), omega.sin()) };
    extra[0] = c;
    extra[1] = s;
    arms.push(extra);
    NodeArmSet::new(arms)
}

/// `K` standard-Gaussian draws in `ℝᵈ`, each scaled to unit norm.
pub fn random_unit_arms(k: usize, d: usize, seed: u64) -> Result<NodeArmSet> {
    if d == 0 {
        return Err(GbbError::InvalidSize("d must be positive".into()));
    }
    if k < d {
        return Err(GbbError::RankDeficient { rank: k, dim: d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arms = (0..k)
        .map(|_| {
            loop {
                let v: DVector<f64> = DVector::from_fn(d, |_, _| StandardNormal.sample(&mut rng));
                let norm = v.norm();
                if norm > 1e-12 {
                    break v / norm;
                }
            }
        })
        .collect();
    NodeArmSet::new(arms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn e(d: usize, i: usize) -> DVector<f64> {
        DVector::from_fn(d, |r, _| if r == i { 1.0 } else { 0.0 })
    }

    #[test]
    fn lift_basis_vectors() {
        assert_eq!(lift(&e(2, 0), &e(2, 1)).unwrap().as_slice(), &[0.0, 0.0, 1.0, 0.0]);
        for d in 2..6 {
            assert_eq!(lift(&e(d, 0), &e(d, 0)).unwrap(), e(d * d, 0));
        }
        assert!(matches!(lift(&e(2, 0), &e(3, 0)), Err(GbbError::DimensionMismatch { .. })));
    }

    #[test]
    fn lift_matches_outer_product() {
        let x = DVector::from_vec(vec![0.3, -1.2, 2.0]);
        let y = DVector::from_vec(vec![1.5, 0.7, -0.4]);
        let z = lift(&x, &y).unwrap();
        let outer = &x * y.transpose();
        let back = unvec(&z, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((back[(i, j)] - outer[(i, j)]).abs() < 1e-15);
            }
        }
        assert_eq!(vec_matrix(&outer), z);
    }

    #[test]
    fn soare_sets() {
        let s = soare_arm_set(5, 0.1).unwrap();
        assert_eq!((s.len(), s.dim()), (6, 5));
        let s2 = soare_arm_set(2, FRAC_PI_2).unwrap();
        assert!((s2.arm(2)[0]).abs() < 1e-15 && (s2.arm(2)[1] - 1.0).abs() < 1e-15);
        assert!((soare_arm_set(3, 0.1).unwrap().arm(3).norm() - 1.0).abs() < 1e-15);
        assert!(soare_arm_set(3, 0.0).is_err());
        assert!(soare_arm_set(3, 1.6).is_err());
        assert!(soare_arm_set(1, 0.5).is_err());
    }

    #[test]
    fn random_arms_are_unit_and_seeded() {
        let a = random_unit_arms(100, 5, 42).unwrap();
        assert_eq!(a.len(), 100);
        assert!(a.arms().iter().all(|x| (x.norm() - 1.0).abs() < 1e-12));
        assert_eq!(a, random_unit_arms(100, 5, 42).unwrap());
        assert_ne!(a, random_unit_arms(100, 5, 43).unwrap());
        assert!(matches!(random_unit_arms(3, 5, 1), Err(GbbError::RankDeficient { .. })));
    }

    #[test]
    fn rank_check() {
        let r = NodeArmSet::from_rows(&[vec![1.0, 0.0], vec![2.0, 0.0], vec![-1.0, 0.0]]);
        assert!(matches!(r, Err(GbbError::RankDeficient { rank: 1, dim: 2 })));
        assert!(NodeArmSet::from_rows(&[vec![1.0, 0.0], vec![1.0, 1e-3]]).is_ok());
    }

    #[test]
    fn edge_arm_set_indexing() {
        let base = soare_arm_set(3, 0.4).unwrap();
        let set = EdgeArmSet::new(base.clone());
        assert_eq!(set.len(), 16);
        assert_eq!(set.dim(), 9);
        for ea in set.iter() {
            assert_eq!(*ea.vector, lift(base.arm(ea.left_index), base.arm(ea.right_index)).unwrap());
            assert_eq!(set.index(ea.left_index, ea.right_index), set.pair(set.index(ea.left_index, ea.right_index)).0 * 4 + ea.right_index);
        }
        // contains the canonical basis of R^{d²}
        for i in 0..9 {
            assert!(set.vectors().contains(&e(9, i)));
        }
    }

    #[test]
    fn duplicates_at_right_angle() {
        let set = EdgeArmSet::new(soare_arm_set(2, FRAC_PI_2).unwrap());
        let groups = set.duplicate_groups();
        // x3 == e2, so (0,1) duplicates (0,2), and so on
        assert_eq!(groups[set.index(0, 1)], vec![set.index(0, 2)]);
        assert_eq!(groups[set.index(1, 1)].len(), 3);
        assert!(groups[set.index(0, 0)].is_empty());
    }

    #[test]
    fn csv_import() {
        let text = "# arms\n1.0, 0.0\n0.0,1.0\n0.6,0.8\n";
        let set = NodeArmSet::read_csv(text.as_bytes()).unwrap();
        assert_eq!(set.len(), 3);
        assert_eq!(set.arm(2)[1], 0.8);
        let mut buf = Vec::new();
        set.write_csv(&mut buf).unwrap();
        assert_eq!(NodeArmSet::read_csv(&buf[..]).unwrap(), set);
        assert!(NodeArmSet::read_csv("1.0,x\n".as_bytes()).is_err());
        assert!(NodeArmSet::read_csv("1.0,0\n0,1,2\n".as_bytes()).is_err());
    }
}
