//! Fixtures shared by the benchmarks.

use gbb_core::arms::{random_unit_arms, soare_arm_set, NodeArmSet};
use gbb_core::design::{frank_wolfe_design, DesignDistribution, FrankWolfeOptions};
use gbb_core::environment::{soare_parameter, BilinearParameter, Environment, NoiseModel};
use gbb_core::graph::{Graph, GraphKind};
use gbb_core::learner::{LearnerConfig, LearnerState};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_arms(k: usize, d: usize) -> NodeArmSet {
    random_unit_arms(k, d, 42).expect("k >= d")
}

pub fn optimal_design(arms: &NodeArmSet) -> DesignDistribution {
    frank_wolfe_design(arms.arms(), FrankWolfeOptions::default()).expect("design converges").distribution
}

/// Learner on the Soare benchmark with `m` directed edges.
pub fn learner(kind: GraphKind, m: usize, d: usize) -> LearnerState {
    let env = Environment::new(soare_parameter(d).unwrap(), NoiseModel::gaussian(1.0).unwrap());
    let graph = Graph::with_edge_count(kind, m).expect("realizable m");
    LearnerState::init(graph, soare_arm_set(d, 0.5).unwrap(), env, LearnerConfig::default()).unwrap()
}

/// Random symmetric Gaussian parameter.
pub fn symmetric_parameter(d: usize, seed: u64) -> BilinearParameter {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
    BilinearParameter::new((&g + g.transpose()) * 0.5).unwrap()
}

pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    Graph::erdos_renyi(n, p, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}
