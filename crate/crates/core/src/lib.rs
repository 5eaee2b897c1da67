//! Best-arm identification in graphical bilinear bandits.
//!
//! A central learner assigns an arm to every node of a directed graph; each
//! edge `(i, j)` then pays `x_iᵀ M★ x_j` plus noise. The crate covers the
//! pieces needed to identify the best pair of arms and to allocate it over
//! the graph:
//!
//! * [`graph`] builds the supported topologies,
//! * [`arms`] holds node arm sets and their lifted edge arms,
//! * [`environment`] simulates rewards,
//! * [`design`] computes G-optimal sampling designs,
//! * [`learner`] runs the randomized G-allocation learner,
//! * [`allocation`] turns a best pair into a graph-wide allocation,
//! * [`variance`] measures how graph shape inflates the design variance,
//! * [`experiment`] drives reproducible sweeps.

// negated float comparisons reject NaN inputs on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod allocation;
pub mod arms;
pub mod design;
pub mod environment;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod learner;
pub mod linalg;
pub mod variance;

pub use allocation::{bipartite_allocation, brute_force_extremes, Allocation, Part, RewardSummary};
pub use arms::{lift, EdgeArmSet, NodeArmSet};
pub use design::{frank_wolfe_design, DesignDistribution, DesignReport, FrankWolfeOptions};
pub use environment::{BilinearParameter, Environment, NoiseModel};
pub use error::{GbbError, Result};
pub use experiment::ExperimentConfig;
pub use graph::{Graph, GraphKind};
pub use learner::{LearnerConfig, LearnerState, LogConstant, RunOutcome, StopReport};
pub use variance::{VarianceBoundSpec, VarianceEstimate};
