//! Randomized G-allocation learner for graphical bilinear bandits.
//!
//! Each round draws one node-arm per node i.i.d. from the G-optimal node
//! design `μ★`, observes a noisy reward on every directed edge, and folds the
//! lifted edge-arms into the ridge statistics
//!
//! ```text
//! A_t = I + Σ z zᵀ,    b_t = Σ z r,    θ̂_t = A_t⁻¹ b_t.
//! ```
//!
//! The learner stops once the empirical best edge-arm `ẑ` beats every other
//! edge-arm `z'` by more than its confidence width
//! `‖ẑ − z'‖_{A_t⁻¹} √(8σ² log(6 m² t² K⁴ / (δ c)))`, with `c = π²` by default.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arms::{EdgeArmSet, NodeArmSet};
use crate::design::{frank_wolfe_design, max_leverage, DesignDistribution, DesignReport, FrankWolfeOptions};
use crate::environment::Environment;
use crate::error::{GbbError, Result};
use crate::graph::Graph;
use crate::linalg::SpdFactor;

/// Denominator constant inside the confidence log term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LogConstant {
    /// `π²`, as in the stopping rule.
    #[default]
    PiSquared,
    /// `π`, as in the sample-complexity bound.
    Pi,
}

impl LogConstant {
    pub fn value(self) -> f64 {
        match self {
            LogConstant::PiSquared => PI * PI,
            LogConstant::Pi => PI,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig {
    pub delta: f64,
    pub seed: u64,
    pub log_constant: LogConstant,
    pub design: FrankWolfeOptions,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig { delta: 0.1, seed: 0, log_constant: LogConstant::PiSquared, design: FrankWolfeOptions::default() }
    }
}

/// Outcome of one evaluation of the stopping rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StopReport {
    pub stopped: bool,
    /// Index of the empirical best edge-arm.
    pub candidate: usize,
    /// `min_{z'} Δ̂(ẑ, z') − width(ẑ, z')`; `stopped ⇔ worst_margin ≥ 0`.
    pub worst_margin: f64,
    pub round: u64,
}

/// One row of the run log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub round: u64,
    pub candidate: usize,
    pub worst_margin: f64,
    pub relative_error: f64,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub candidate: usize,
    pub rounds: u64,
    pub stopped: bool,
    pub history: Vec<CheckRecord>,
}

impl RunOutcome {
    pub fn budget_exhausted(&self) -> bool {
        !self.stopped
    }
}

/// Writes the run log as CSV: `round,candidate,worst_margin,relative_alpha,wall_time`.
pub fn write_run_log<W: std::io::Write>(history: &[CheckRecord], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["round", "candidate", "worst_margin", "relative_alpha", "wall_time"])?;
    for h in history {
        out.write_record([
            h.round.to_string(),
            h.candidate.to_string(),
            h.worst_margin.to_string(),
            h.relative_error.to_string(),
            format!("{:.6}", h.wall_time_secs),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Index of the largest `⟨z, θ⟩`, lowest index on ties.
pub fn empirical_best(vectors: &[DVector<f64>], theta: &DVector<f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, z) in vectors.iter().enumerate() {
        let v = z.dot(theta);
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Best edge-arm under `θ` and the smallest gap to any other edge-arm whose
/// vector differs from it. `None` when every edge-arm duplicates the best.
pub fn min_gap(edge_arms: &EdgeArmSet, theta: &DVector<f64>) -> Option<(usize, f64)> {
    let vectors = edge_arms.vectors();
    let best = empirical_best(vectors, theta);
    let top = vectors[best].dot(theta);
    vectors
        .iter()
        .filter(|z| **z != vectors[best])
        .map(|z| top - z.dot(theta))
        .fold(None, |acc: Option<f64>, g| Some(acc.map_or(g, |a| a.min(g))))
        .map(|g| (best, g))
}

/// Problem constants shared by the sample-complexity bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    /// Node-arm dimension `d`.
    pub d: usize,
    pub sigma: f64,
    pub delta: f64,
    /// Directed edge count.
    pub m: usize,
    /// Node-arm count.
    pub k: usize,
    pub gap_min: f64,
}

/// Right-hand side of `t ≤ 128 σ² d² (1 + α) log(6 m² t² K⁴ / (δ π)) / (m Δ²_min)`
/// evaluated at the given `t`.
pub fn sample_complexity_upper_bound(inputs: &BoundInputs, alpha: f64, t: f64) -> Result<f64> {
    if !(inputs.gap_min > 0.0) {
        return Err(GbbError::Domain(format!("gap_min = {} must be positive", inputs.gap_min)));
    }
    let BoundInputs { d, sigma, delta, m, k, gap_min } = *inputs;
    let (d, m, k) = (d as f64, m as f64, k as f64);
    let log_term = (6.0 * m * m * t * t * k.powi(4) / (delta * PI)).ln();
    Ok(128.0 * sigma * sigma * d * d * (1.0 + alpha) * log_term / (m * gap_min * gap_min))
}

/// Closed-form worst-case ceiling `4 σ² d² / (m Δ²_min)` of the
/// information-theoretic lower bound.
pub fn worst_case_lower_bound(inputs: &BoundInputs) -> Result<f64> {
    if !(inputs.gap_min > 0.0) {
        return Err(GbbError::Domain(format!("gap_min = {} must be positive", inputs.gap_min)));
    }
    let d = inputs.d as f64;
    Ok(4.0 * inputs.sigma * inputs.sigma * d * d / (inputs.m as f64 * inputs.gap_min * inputs.gap_min))
}

/// Learner state. Single-writer.
#[derive(Debug, Clone)]
pub struct LearnerState {
    round: u64,
    design_matrix: DMatrix<f64>,
    response: DVector<f64>,
    estimate: DVector<f64>,
    factor: SpdFactor,
    graph: Graph,
    arms: EdgeArmSet,
    env: Environment,
    mu: DesignDistribution,
    cdf: Vec<f64>,
    design_report: Option<DesignReport>,
    delta: f64,
    log_constant: LogConstant,
    rng: ChaCha8Rng,
    duplicates: Vec<Vec<usize>>,
    pull_counts: Vec<u64>,
    last_draw: Vec<usize>,
    observation_log: Option<Vec<(usize, f64)>>,
}

impl LearnerState {
    /// Fresh state with `μ★` from Frank–Wolfe on the node-arms.
    pub fn init(graph: Graph, node_arms: NodeArmSet, env: Environment, config: LearnerConfig) -> Result<Self> {
        let report = frank_wolfe_design(node_arms.arms(), config.design)?;
        let mu = report.distribution.clone();
        let mut state = Self::with_design(graph, node_arms, env, config, mu)?;
        state.design_report = Some(report);
        Ok(state)
    }

    /// Fresh state sampling from a caller-supplied node design.
    pub fn with_design(
        graph: Graph,
        node_arms: NodeArmSet,
        env: Environment,
        config: LearnerConfig,
        mu: DesignDistribution,
    ) -> Result<Self> {
        if !(config.delta > 0.0 && config.delta < 1.0) {
            return Err(GbbError::Domain(format!("delta = {} not in (0, 1)", config.delta)));
        }
        if env.param.dim() != node_arms.dim() {
            return Err(GbbError::DimensionMismatch { expected: node_arms.dim(), got: env.param.dim() });
        }
        if !env.param.is_symmetric(1e-12) {
            return Err(GbbError::Domain(
                "parameter matrix must be symmetric; symmetrize it first".into(),
            ));
        }
        if mu.len() != node_arms.len() {
            return Err(GbbError::DimensionMismatch { expected: node_arms.len(), got: mu.len() });
        }
        let arms = EdgeArmSet::new(node_arms);
        let p = arms.dim();
        let design_matrix = DMatrix::identity(p, p);
        let factor = SpdFactor::new(&design_matrix)?;
        Ok(LearnerState {
            round: 0,
            design_matrix,
            response: DVector::zeros(p),
            estimate: DVector::zeros(p),
            factor,
            cdf: mu.cdf(),
            duplicates: arms.duplicate_groups(),
            pull_counts: vec![0; arms.len()],
            last_draw: Vec::new(),
            graph,
            arms,
            env,
            mu,
            design_report: None,
            delta: config.delta,
            log_constant: config.log_constant,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            observation_log: None,
        })
    }

    /// Keeps every `(edge-arm index, reward)` observation from now on.
    pub fn record_observations(&mut self) {
        self.observation_log.get_or_insert_with(Vec::new);
    }

    pub fn observation_log(&self) -> Option<&[(usize, f64)]> {
        self.observation_log.as_deref()
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn design_matrix(&self) -> &DMatrix<f64> {
        &self.design_matrix
    }

    pub fn response(&self) -> &DVector<f64> {
        &self.response
    }

    pub fn estimate(&self) -> &DVector<f64> {
        &self.estimate
    }

    pub fn mu(&self) -> &DesignDistribution {
        &self.mu
    }

    pub fn design_report(&self) -> Option<&DesignReport> {
        self.design_report.as_ref()
    }

    pub fn edge_arms(&self) -> &EdgeArmSet {
        &self.arms
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn environment(&self) -> &Environment {
        &self.env
    }

    /// Node-arm indices drawn in the most recent round.
    pub fn last_draw(&self) -> &[usize] {
        &self.last_draw
    }

    /// Number of times each edge-arm has been pulled.
    pub fn pull_counts(&self) -> &[u64] {
        &self.pull_counts
    }

    /// Total observations, `m · t`.
    pub fn n_observations(&self) -> u64 {
        self.pull_counts.iter().sum()
    }

    fn draw_node_arm(&mut self) -> usize {
        let u: f64 = self.rng.random();
        self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1)
    }

    /// One round: sample node-arms, observe every edge, update `A`, `b`, `θ̂`.
    pub fn step(&mut self) {
        let n = self.graph.n_nodes();
        let mut draw = std::mem::take(&mut self.last_draw);
        draw.clear();
        for _ in 0..n {
            let a = self.draw_node_arm();
            draw.push(a);
        }

        let k = self.arms.n_node_arms();
        let mut counts = vec![0u32; self.arms.len()];
        let mut sums = vec![0.0; self.arms.len()];
        for &(i, j) in self.graph.edges() {
            let idx = draw[i] * k + draw[j];
            let r = self.env.pull_lifted(self.arms.vector(idx), &mut self.rng);
            counts[idx] += 1;
            sums[idx] += r;
            if let Some(log) = self.observation_log.as_mut() {
                log.push((idx, r));
            }
        }
        for (idx, &c) in counts.iter().enumerate().filter(|(_, &c)| c > 0) {
            let z = self.arms.vector(idx);
            self.design_matrix.ger(c as f64, z, z, 1.0);
            self.response.axpy(sums[idx], z, 1.0);
            self.pull_counts[idx] += c as u64;
        }
        self.factor = SpdFactor::new(&self.design_matrix).expect("A_t ⪰ I stays positive definite");
        self.estimate = self.factor.solve(&self.response);
        self.last_draw = draw;
        self.round += 1;
    }

    /// Confidence-width multiplier `√(8σ² log(6 m² t² K⁴ / (δ c)))`.
    pub fn width_coefficient(&self) -> f64 {
        let m = self.graph.n_edges() as f64;
        let t = self.round.max(1) as f64;
        let k = self.arms.n_node_arms() as f64;
        let sigma = self.env.noise.sigma;
        let arg = 6.0 * m * m * t * t * k.powi(4) / (self.delta * self.log_constant.value());
        (8.0 * sigma * sigma * arg.ln()).sqrt()
    }

    /// Evaluates the stopping rule at the current round.
    pub fn stopping_condition(&self) -> StopReport {
        let vectors = self.arms.vectors();
        let candidate = empirical_best(vectors, &self.estimate);
        if self.round == 0 {
            return StopReport { stopped: false, candidate, worst_margin: f64::NEG_INFINITY, round: 0 };
        }
        let coef = self.width_coefficient();
        let top = vectors[candidate].dot(&self.estimate);
        let dups = &self.duplicates[candidate];
        let mut worst = f64::INFINITY;
        for (idx, z) in vectors.iter().enumerate() {
            if idx == candidate || dups.contains(&idx) {
                continue;
            }
            let gap = top - z.dot(&self.estimate);
            let width = if coef == 0.0 { 0.0 } else { coef * self.factor.inv_quad(&(&vectors[candidate] - z)).sqrt() };
            worst = worst.min(gap - width);
        }
        StopReport { stopped: worst >= 0.0, candidate, worst_margin: worst, round: self.round }
    }

    /// `f_𝒵(A_t) · m t / d² − 1`.
    pub fn relative_error(&self) -> f64 {
        let (_, f) = max_leverage(self.arms.vectors(), &self.factor);
        let mt = (self.graph.n_edges() as u64 * self.round.max(1)) as f64;
        f * mt / self.arms.dim() as f64 - 1.0
    }

    /// Empirical frequency of each edge-arm among all pulls.
    pub fn empirical_histogram(&self) -> Vec<f64> {
        let total = self.n_observations().max(1) as f64;
        self.pull_counts.iter().map(|&c| c as f64 / total).collect()
    }

    /// Steps until the stopping rule fires (checked every `check_every`
    /// rounds and at the budget) or `max_rounds` rounds have been played.
    pub fn run(&mut self, max_rounds: u64, check_every: u64) -> RunOutcome {
        let check_every = check_every.max(1);
        let start = Instant::now();
        let mut history = Vec::new();
        let mut last = None;
        while self.round < max_rounds {
            self.step();
            if self.round.is_multiple_of(check_every) || self.round == max_rounds {
                let report = self.stopping_condition();
                history.push(CheckRecord {
                    round: self.round,
                    candidate: report.candidate,
                    worst_margin: report.worst_margin,
                    relative_error: self.relative_error(),
                    wall_time_secs: start.elapsed().as_secs_f64(),
                });
                last = Some(report);
                if report.stopped {
                    break;
                }
            }
        }
        let report = last.unwrap_or_else(|| self.stopping_condition());
        RunOutcome { candidate: report.candidate, rounds: self.round, stopped: report.stopped, history }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arms::soare_arm_set;
    use crate::environment::{soare_parameter, BilinearParameter, NoiseModel};

    fn soare_state(n: usize, d: usize, omega: f64, sigma: f64, seed: u64) -> LearnerState {
        let env = Environment::new(soare_parameter(d).unwrap(), NoiseModel::gaussian(sigma).unwrap());
        let cfg = LearnerConfig { seed, ..LearnerConfig::default() };
        LearnerState::init(Graph::circle(n).unwrap(), soare_arm_set(d, omega).unwrap(), env, cfg).unwrap()
    }

    #[test]
    fn fresh_state() {
        let s = soare_state(5, 3, 0.5, 1.0, 1);
        assert_eq!(s.round(), 0);
        assert!(s.estimate().iter().all(|&v| v == 0.0));
        assert_eq!(s.design_matrix(), &DMatrix::identity(9, 9));
        assert!(s.design_report().is_some());
        assert!(!s.stopping_condition().stopped);
    }

    #[test]
    fn seeded_states_agree() {
        let mut a = soare_state(6, 2, 1.0, 1.0, 77);
        let mut b = soare_state(6, 2, 1.0, 1.0, 77);
        assert_eq!(a.mu(), b.mu());
        a.step();
        b.step();
        assert_eq!(a.last_draw(), b.last_draw());
        assert_eq!(a.estimate(), b.estimate());
        let mut c = soare_state(6, 2, 1.0, 1.0, 78);
        c.step();
        assert_ne!(a.estimate(), c.estimate());
    }

    #[test]
    fn trace_grows_by_pulled_norms() {
        let mut s = soare_state(7, 3, 0.3, 1.0, 2);
        s.record_observations();
        let before = s.design_matrix().trace();
        s.step();
        let added: f64 = s.observation_log().unwrap().iter().map(|&(i, _)| s.edge_arms().vector(i).norm_squared()).sum();
        assert!((s.design_matrix().trace() - before - added).abs() < 1e-12);
        assert_eq!(s.observation_log().unwrap().len(), s.graph().n_edges());
        assert_eq!(s.n_observations(), s.graph().n_edges() as u64);
    }

    #[test]
    fn point_mass_design_pulls_one_edge_arm() {
        let base = soare_arm_set(3, 0.3).unwrap();
        let env = Environment::new(soare_parameter(3).unwrap(), NoiseModel::gaussian(1.0).unwrap());
        let mu = DesignDistribution::point_mass(4, 2).unwrap();
        let mut s = LearnerState::with_design(Graph::star(5).unwrap(), base, env, LearnerConfig::default(), mu).unwrap();
        for _ in 0..3 {
            s.step();
        }
        let target = s.edge_arms().index(2, 2);
        assert_eq!(s.pull_counts()[target], 3 * 8);
        assert_eq!(s.n_observations(), 24);
    }

    #[test]
    fn noiseless_estimate_has_ridge_bias_only() {
        let mut s = soare_state(10, 2, 0.8, 0.0, 3);
        for _ in 0..200 {
            s.step();
        }
        let theta = s.environment().param.theta().clone();
        // b = (A − I) θ★ so θ̂ − θ★ = −A⁻¹ θ★
        let lam_min = s.design_matrix().clone().symmetric_eigen().eigenvalues.min();
        let err = (s.estimate() - &theta).norm();
        assert!(err <= theta.norm() / lam_min + 1e-12);
        let closed = &theta - s.design_matrix().clone().try_inverse().unwrap() * &theta;
        assert!((s.estimate() - closed).norm() < 1e-10);
    }

    #[test]
    fn zero_noise_stops_immediately() {
        let mut s = soare_state(6, 3, 0.5, 0.0, 4);
        s.step();
        let rep = s.stopping_condition();
        assert!(rep.stopped);
        assert_eq!(rep.candidate, 0);
    }

    #[test]
    fn first_round_does_not_stop_with_unit_noise() {
        let env = Environment::new(soare_parameter(5).unwrap(), NoiseModel::gaussian(1.0).unwrap());
        let mut s = LearnerState::init(Graph::circle(10).unwrap(), soare_arm_set(5, 0.1).unwrap(), env, LearnerConfig::default()).unwrap();
        s.step();
        let rep = s.stopping_condition();
        assert!(!rep.stopped);
        assert!(rep.worst_margin < 0.0);
        // A₁ ≈ I + a handful of pulls: the width on a unit-norm difference is
        // far above the soare gap 2(1 − cos 0.1)
        let e = DVector::from_fn(25, |i, _| if i == 0 { 1.0 } else { 0.0 });
        assert!(s.width_coefficient() * s.factor.inv_quad(&e).sqrt() > 1.0);
    }

    #[test]
    fn duplicate_edge_arms_do_not_block_stopping() {
        // ω = π/2 makes the extra arm equal e₂
        let env = Environment::new(soare_parameter(2).unwrap(), NoiseModel::gaussian(1.0).unwrap());
        let mut s = LearnerState::init(
            Graph::circle(10).unwrap(),
            soare_arm_set(2, std::f64::consts::FRAC_PI_2).unwrap(),
            env,
            LearnerConfig { seed: 5, ..LearnerConfig::default() },
        )
        .unwrap();
        let out = s.run(100_000, 10);
        assert!(out.stopped);
        assert_eq!(out.candidate, 0);
    }

    #[test]
    fn run_budget_and_history() {
        let mut s = soare_state(6, 3, 0.1, 1.0, 6);
        let out = s.run(25, 10);
        assert!(out.budget_exhausted());
        assert_eq!(out.rounds, 25);
        assert_eq!(out.history.len(), 3);
        assert_eq!(out.history.iter().map(|h| h.round).collect::<Vec<_>>(), vec![10, 20, 25]);

        let mut s = soare_state(6, 3, 0.1, 1.0, 6);
        let out = s.run(0, 10);
        assert!(out.budget_exhausted() && out.history.is_empty() && out.rounds == 0);
    }

    #[test]
    fn log_constant_switch() {
        let mut s = soare_state(6, 2, 0.5, 1.0, 8);
        s.step();
        let a = s.width_coefficient();
        s.log_constant = LogConstant::Pi;
        let b = s.width_coefficient();
        assert!(b > a);
    }

    #[test]
    fn rejects_asymmetric_parameter() {
        let env = Environment::new(
            BilinearParameter::new(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0])).unwrap(),
            NoiseModel::gaussian(1.0).unwrap(),
        );
        let r = LearnerState::init(Graph::star(3).unwrap(), soare_arm_set(2, 0.5).unwrap(), env, LearnerConfig::default());
        assert!(matches!(r, Err(GbbError::Domain(_))));
    }

    #[test]
    fn relative_error_is_zero_at_scaled_optimum() {
        let mut s = soare_state(4, 2, 0.7, 1.0, 9);
        s.round = 10;
        let lambda = crate::design::product_distribution(s.mu());
        let mt = (s.graph().n_edges() * 10) as f64;
        let a = crate::design::covariance(s.edge_arms().vectors(), &lambda).unwrap() * mt;
        s.factor = SpdFactor::new(&a).unwrap();
        let h = s.design_report().unwrap().objective;
        // f(mtΣ(λ)) mt / d² = h_X² / d²
        assert!((s.relative_error() - (h * h / 4.0 - 1.0)).abs() < 1e-9);
        assert!(s.relative_error() < 0.021);
    }

    #[test]
    fn min_gap_enumeration() {
        let set = EdgeArmSet::new(soare_arm_set(5, 0.1).unwrap());
        let theta = soare_parameter(5).unwrap().theta().clone();
        let (best, gap) = min_gap(&set, &theta).unwrap();
        assert_eq!(best, 0);
        // closest competitor is vec(e₁ x₆ᵀ) with reward 2 cos ω
        assert!((gap - 2.0 * (1.0 - 0.1f64.cos())).abs() < 1e-14);
        let brute = set.vectors().iter().skip(1).map(|z| 2.0 - z.dot(&theta)).fold(f64::INFINITY, f64::min);
        assert_eq!(gap, brute);
    }

    #[test]
    fn bounds() {
        let base = BoundInputs { d: 2, sigma: 1.0, delta: 0.1, m: 4, k: 3, gap_min: 1.0 };
        assert_eq!(worst_case_lower_bound(&base).unwrap(), 4.0);
        let doubled = BoundInputs { sigma: 2.0, ..base };
        assert_eq!(worst_case_lower_bound(&doubled).unwrap(), 16.0);
        assert!(worst_case_lower_bound(&BoundInputs { gap_min: 0.0, ..base }).is_err());

        let quiet = BoundInputs { sigma: 0.0, ..base };
        assert_eq!(sample_complexity_upper_bound(&quiet, 0.0, 100.0).unwrap(), 0.0);
        let u1 = sample_complexity_upper_bound(&base, 0.0, 100.0).unwrap();
        let u2 = sample_complexity_upper_bound(&BoundInputs { m: 8, ..base }, 0.0, 100.0).unwrap();
        let log_ratio = (6.0 * 64.0 * 1e4 * 81.0 / (0.1 * PI)).ln() / (6.0 * 16.0 * 1e4 * 81.0 / (0.1 * PI)).ln();
        assert!((u2 / u1 - 0.5 * log_ratio).abs() < 1e-12);
        assert!(sample_complexity_upper_bound(&BoundInputs { gap_min: -1.0, ..base }, 0.0, 1.0).is_err());

        for d in [2, 3, 5] {
            for m in [2, 12, 156] {
                for t in [3.0, 10.0, 1e4] {
                    for delta in [0.1, 0.01] {
                        for gap in [0.01, 1.0] {
                            let b = BoundInputs { d, sigma: 1.0, delta, m, k: d + 1, gap_min: gap };
                            assert!(worst_case_lower_bound(&b).unwrap() <= sample_complexity_upper_bound(&b, 0.0, t).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn run_log_csv() {
        let mut s = soare_state(5, 2, 1.0, 1.0, 10);
        let out = s.run(30, 10);
        let mut buf = Vec::new();
        write_run_log(&out.history, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("round,candidate,worst_margin,relative_alpha,wall_time\n"));
        assert_eq!(text.lines().count(), 1 + out.history.len());
    }
}
