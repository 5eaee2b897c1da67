//! Joint-arm allocation from a best edge-arm.
//!
//! Finding the joint arm maximizing the global reward is NP-hard, but the
//! best edge-arm `(x★, x★')` only needs `K²` evaluations. The greedy pass
//! below grows a bipartition `(V₁, V₂)` node by node, placing each node
//! opposite the majority of its already-placed neighbors, so at least half
//! of the directed edges join the two parts and carry `z★`. The resulting
//! global reward is within a ½ differential ratio of the optimum.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::arms::NodeArmSet;
use crate::environment::{global_reward, BilinearParameter};
use crate::error::{GbbError, Result};
use crate::graph::Graph;

/// Exhaustive search refuses instances with more joint arms than this.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Part {
    First,
    Second,
}

impl Part {
    pub fn label(self) -> u8 {
        match self {
            Part::First => 1,
            Part::Second => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Allocation {
    /// Node-arm index per node.
    pub assignment: Vec<usize>,
    /// Part per node.
    pub part: Vec<Part>,
    /// `(x★, x★')` as node-arm indices.
    pub star_pair: (usize, usize),
}

impl Allocation {
    pub fn nodes_in(&self, part: Part) -> Vec<usize> {
        (0..self.part.len()).filter(|&i| self.part[i] == part).collect()
    }

    /// Directed edges whose endpoints lie in different parts.
    pub fn crossing_edges(&self, graph: &Graph) -> usize {
        graph.edges().iter().filter(|&&(i, j)| self.part[i] != self.part[j]).count()
    }

    /// CSV with header `node,part,arm`.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["node", "part", "arm"])?;
        for (node, (arm, part)) in self.assignment.iter().zip(&self.part).enumerate() {
            out.write_record([node.to_string(), part.label().to_string(), arm.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Operation counts gathered while allocating.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverCounters {
    pub pair_evaluations: u64,
    pub neighbor_visits: u64,
    pub node_steps: u64,
}

impl SolverCounters {
    pub fn total(&self) -> u64 {
        self.pair_evaluations + self.neighbor_visits + self.node_steps
    }
}

fn check_dims(arms: &NodeArmSet, m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != arms.dim() || m.ncols() != arms.dim() {
        return Err(GbbError::DimensionMismatch { expected: arms.dim(), got: m.nrows() });
    }
    Ok(())
}

/// Exhaustive argmax of `xᵀ M x'` over ordered pairs; the lexicographically
/// smallest pair wins ties.
pub fn best_edge_arm(m: &DMatrix<f64>, arms: &NodeArmSet) -> Result<((usize, usize), f64)> {
    let mut counters = SolverCounters::default();
    best_edge_arm_counted(m, arms, &mut counters)
}

fn best_edge_arm_counted(
    m: &DMatrix<f64>,
    arms: &NodeArmSet,
    counters: &mut SolverCounters,
) -> Result<((usize, usize), f64)> {
    check_dims(arms, m)?;
    let mut best = ((0, 0), f64::NEG_INFINITY);
    for a in 0..arms.len() {
        let left = arms.arm(a).transpose() * m;
        for b in 0..arms.len() {
            counters.pair_evaluations += 1;
            let v = left.dot(&arms.arm(b).transpose());
            if v > best.1 {
                best = ((a, b), v);
            }
        }
    }
    Ok(best)
}

/// Greedy bipartite allocation, visiting nodes in ascending index.
pub fn bipartite_allocation(graph: &Graph, arms: &NodeArmSet, m: &DMatrix<f64>) -> Result<Allocation> {
    bipartite_allocation_counted(graph, arms, m).map(|(a, _)| a)
}

/// [`bipartite_allocation`] together with its operation counts.
pub fn bipartite_allocation_counted(
    graph: &Graph,
    arms: &NodeArmSet,
    m: &DMatrix<f64>,
) -> Result<(Allocation, SolverCounters)> {
    let mut counters = SolverCounters::default();
    let ((star, star_prime), _) = best_edge_arm_counted(m, arms, &mut counters)?;
    let n = graph.n_nodes();
    let mut part: Vec<Option<Part>> = vec![None; n];
    let mut assignment = vec![0; n];
    for i in 0..n {
        counters.node_steps += 1;
        let (mut n1, mut n2) = (0usize, 0usize);
        for &j in graph.neighbors(i) {
            counters.neighbor_visits += 1;
            match part[j] {
                Some(Part::First) => n1 += 1,
                Some(Part::Second) => n2 += 1,
                None => {}
            }
        }
        if n1 > n2 {
            assignment[i] = star_prime;
            part[i] = Some(Part::Second);
        } else {
            assignment[i] = star;
            part[i] = Some(Part::First);
        }
    }
    let part = part.into_iter().map(|p| p.expect("every node visited")).collect();
    Ok((Allocation { assignment, part, star_pair: (star, star_prime) }, counters))
}

/// Extremes of the global reward over all `Kⁿ` joint arms.
#[derive(Debug, Clone, PartialEq)]
pub struct Extremes {
    pub best_allocation: Vec<usize>,
    pub best: f64,
    pub worst_allocation: Vec<usize>,
    pub worst: f64,
}

/// Enumerates every joint arm. Guarded by [`BRUTE_FORCE_LIMIT`].
pub fn brute_force_extremes(graph: &Graph, arms: &NodeArmSet, param: &BilinearParameter) -> Result<Extremes> {
    let k = arms.len();
    let n = graph.n_nodes();
    let total = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > BRUTE_FORCE_LIMIT {
        return Err(GbbError::TooLarge(total));
    }
    let mut alloc = vec![0usize; n];
    let mut ext = Extremes {
        best_allocation: alloc.clone(),
        best: f64::NEG_INFINITY,
        worst_allocation: alloc.clone(),
        worst: f64::INFINITY,
    };
    loop {
        let r = global_reward(&alloc, graph, arms, param)?;
        if r > ext.best {
            ext.best = r;
            ext.best_allocation.clone_from(&alloc);
        }
        if r < ext.worst {
            ext.worst = r;
            ext.worst_allocation.clone_from(&alloc);
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(ext);
            }
            alloc[pos] += 1;
            if alloc[pos] < k {
                break;
            }
            alloc[pos] = 0;
            pos += 1;
        }
    }
}

/// `(r − r_min) / (r★ − r_min)`, defined as 1 when the extremes coincide.
pub fn differential_ratio(reward: f64, best: f64, worst: f64) -> f64 {
    let scale = best.abs().max(worst.abs()).max(1.0);
    if best - worst <= 1e-12 * scale {
        return 1.0;
    }
    (reward - worst) / (best - worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardSummary {
    pub reward: f64,
    pub best: f64,
    pub worst: f64,
    pub differential_ratio: f64,
}

impl RewardSummary {
    pub fn new(reward: f64, best: f64, worst: f64) -> Self {
        RewardSummary { reward, best, worst, differential_ratio: differential_ratio(reward, best, worst) }
    }
}

/// Greedy allocation scored against the exhaustive extremes.
pub fn summarize(graph: &Graph, arms: &NodeArmSet, param: &BilinearParameter) -> Result<(Allocation, RewardSummary)> {
    let alloc = bipartite_allocation(graph, arms, param.matrix())?;
    let reward = global_reward(&alloc.assignment, graph, arms, param)?;
    let ext = brute_force_extremes(graph, arms, param)?;
    Ok((alloc, RewardSummary::new(reward, ext.best, ext.worst)))
}
