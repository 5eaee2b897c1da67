//! Reproducible sweeps of the learner and the variance estimator.
//!
//! Every repetition gets its own seed, derived from the master seed by
//!
//! ```text
//! mix(a, b)  = splitmix64(a ^ splitmix64(b))
//! row_seed   = mix(mix(mix(master, kind_tag), axis), rep)
//! ```
//!
//! where `kind_tag` is the family's position in [`GraphKind::FAMILIES`]
//! (`star = 0, complete = 1, circle = 2, matching = 3`, custom graphs use 4),
//! `axis` is `m` for edge sweeps and variance runs and `d` for dimension
//! sweeps, and `rep` is the zero-based repetition index. All values of `ω`
//! in a sweep share seeds.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::arms::{random_unit_arms, soare_arm_set, EdgeArmSet, NodeArmSet};
use crate::design::{frank_wolfe_design, DesignDistribution, FrankWolfeOptions};
use crate::environment::{soare_parameter, BilinearParameter, Environment, NoiseModel};
use crate::error::{GbbError, Result};
use crate::graph::{Graph, GraphKind};
use crate::learner::{min_gap, LearnerConfig, LearnerState, LogConstant, RunOutcome};
use crate::variance::{check_m_grid, least_squares_line, variance_norm_with_bootstrap, VarianceEstimate, DEFAULT_BOOTSTRAP};

/// Edge counts realizable by all four families.
pub const SHARED_M_GRID: [usize; 6] = [12, 30, 56, 90, 132, 156];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Design,
    #[default]
    Learn,
    Allocate,
    Variance,
    SweepEdges,
    SweepDim,
    SweepVariance,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Design => "design",
            ExperimentKind::Learn => "learn",
            ExperimentKind::Allocate => "allocate",
            ExperimentKind::Variance => "variance",
            ExperimentKind::SweepEdges => "sweep-edges",
            ExperimentKind::SweepDim => "sweep-dim",
            ExperimentKind::SweepVariance => "sweep-variance",
        }
    }
}

/// Shared configuration for every subcommand. Absent JSON fields take the
/// defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Family for single runs; `custom` means "read `graph_path`".
    pub graph: GraphKind,
    pub graph_path: Option<PathBuf>,
    pub n_nodes: Option<usize>,
    /// Edge count for single runs, and the fixed `m` of dimension sweeps.
    pub m: Option<usize>,
    /// Families compared by the sweeps.
    pub kinds: Vec<GraphKind>,
    pub m_grid: Vec<usize>,
    pub d: usize,
    pub d_grid: Vec<usize>,
    /// Overrides `omegas` when set.
    pub omega: Option<f64>,
    pub omegas: Vec<f64>,
    pub sigma: f64,
    pub delta: f64,
    pub seed: u64,
    pub repetitions: usize,
    pub max_rounds: u64,
    pub check_every: u64,
    pub log_constant: LogConstant,
    /// Frank–Wolfe tolerance.
    pub tol: f64,
    pub max_iter: usize,
    /// Random unit arms per variance experiment.
    pub n_arms: usize,
    pub n_samples: usize,
    pub bootstrap: usize,
    pub workers: Option<usize>,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: ExperimentKind::default(),
            graph: GraphKind::Circle,
            graph_path: None,
            n_nodes: None,
            m: None,
            kinds: GraphKind::FAMILIES.to_vec(),
            m_grid: SHARED_M_GRID.to_vec(),
            d: 5,
            d_grid: vec![2, 3, 4, 5],
            omega: None,
            omegas: vec![0.1, FRAC_PI_2],
            sigma: 1.0,
            delta: 0.1,
            seed: 0,
            repetitions: 100,
            max_rounds: 1_000_000,
            check_every: 10,
            log_constant: LogConstant::default(),
            tol: 1e-2,
            max_iter: 100_000,
            n_arms: 100,
            n_samples: 100,
            bootstrap: DEFAULT_BOOTSTRAP,
            workers: None,
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GbbError::Config(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| GbbError::Config(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text)
    }

    pub fn omega_values(&self) -> Vec<f64> {
        match self.omega {
            Some(w) => vec![w],
            None => self.omegas.clone(),
        }
    }

    /// `m` for dimension sweeps.
    pub fn sweep_dim_m(&self) -> usize {
        self.m.unwrap_or(156)
    }

    pub fn design_options(&self) -> FrankWolfeOptions {
        FrankWolfeOptions { tol: self.tol, max_iter: self.max_iter }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(GbbError::Config(msg));
        if self.repetitions < 1 {
            return bad("repetitions must be >= 1".into());
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("delta = {} not in (0, 1)", self.delta));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return bad(format!("sigma = {} must be >= 0", self.sigma));
        }
        if self.max_rounds < 1 || self.check_every < 1 {
            return bad("max_rounds and check_every must be >= 1".into());
        }
        if !(self.tol > 0.0) || self.max_iter < 1 {
            return bad("tol must be > 0 and max_iter >= 1".into());
        }
        if let Some(&w) = self.omega_values().iter().find(|w| !(**w > 0.0 && **w <= FRAC_PI_2)) {
            return bad(format!("omega = {w} not in (0, pi/2]"));
        }
        if self.workers == Some(0) {
            return bad("workers must be >= 1".into());
        }
        match self.experiment {
            ExperimentKind::SweepEdges | ExperimentKind::SweepVariance => {
                if self.kinds.is_empty() || self.m_grid.is_empty() {
                    return bad("kinds and m_grid must be non-empty".into());
                }
                for kind in &self.kinds {
                    if let Some(&m) = self.m_grid.iter().find(|&&m| kind.nodes_for_edges(m).is_none()) {
                        return bad(format!("m = {m} is not realizable by a {kind} graph"));
                    }
                }
                if self.experiment == ExperimentKind::SweepVariance {
                    if self.n_samples < 2 {
                        return bad("n_samples must be >= 2".into());
                    }
                    if self.n_arms < self.d {
                        return bad(format!("n_arms = {} must be >= d = {}", self.n_arms, self.d));
                    }
                } else if self.d < 2 {
                    return bad("d must be >= 2".into());
                }
            }
            ExperimentKind::SweepDim => {
                let m = self.sweep_dim_m();
                if let Some(kind) = self.kinds.iter().find(|k| k.nodes_for_edges(m).is_none()) {
                    return bad(format!("m = {m} is not realizable by a {kind} graph"));
                }
                if self.kinds.is_empty() || self.d_grid.is_empty() || self.d_grid.iter().any(|&d| d < 2) {
                    return bad("kinds and d_grid must be non-empty with every d >= 2".into());
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn thread_pool(&self) -> Result<rayon::ThreadPool> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(w) = self.workers {
            builder = builder.num_threads(w);
        }
        builder.build().map_err(|e| GbbError::Config(e.to_string()))
    }
}

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mix(a: u64, b: u64) -> u64 {
    splitmix64(a ^ splitmix64(b))
}

pub fn kind_tag(kind: GraphKind) -> u64 {
    GraphKind::FAMILIES.iter().position(|&k| k == kind).unwrap_or(4) as u64
}

/// Seed of one sweep row; see the module docs.
pub fn row_seed(master: u64, kind: GraphKind, axis: usize, rep: usize) -> u64 {
    mix(mix(mix(master, kind_tag(kind)), axis as u64), rep as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub kind: GraphKind,
    pub m: usize,
    pub d: usize,
    pub omega: f64,
    pub rep: usize,
    pub rounds: u64,
    /// The returned edge-arm equals the best one.
    pub correct: bool,
    /// `false` when the round budget ran out first.
    pub stopped: bool,
    pub seed: u64,
}

/// Mean and standard deviation of rounds-to-stop per `(kind, m, d, ω)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub kind: GraphKind,
    pub m: usize,
    pub d: usize,
    pub omega: f64,
    pub runs: usize,
    pub mean_rounds: f64,
    pub sd_rounds: f64,
    pub accuracy: f64,
    pub exhausted: usize,
}

/// A bandit problem together with its sampling design, reused across runs.
#[derive(Debug, Clone)]
pub struct BanditInstance {
    pub arms: NodeArmSet,
    pub param: BilinearParameter,
    pub mu: DesignDistribution,
    best: usize,
    edge_arms: EdgeArmSet,
}

impl BanditInstance {
    /// The Soare benchmark: `soare_arm_set(d, ω)` with `soare_parameter(d)`.
    pub fn new(d: usize, omega: f64, design: FrankWolfeOptions) -> Result<Self> {
        let arms = soare_arm_set(d, omega)?;
        let param = soare_parameter(d)?;
        Self::from_parts(arms, param, design)
    }

    pub fn from_parts(arms: NodeArmSet, param: BilinearParameter, design: FrankWolfeOptions) -> Result<Self> {
        let mu = frank_wolfe_design(arms.arms(), design)?.distribution;
        let edge_arms = EdgeArmSet::new(arms.clone());
        let (best, _) = min_gap(&edge_arms, param.theta())
            .ok_or_else(|| GbbError::Domain("all edge-arms coincide; there is no best arm to find".into()))?;
        Ok(BanditInstance { arms, param, mu, best, edge_arms })
    }

    pub fn best_index(&self) -> usize {
        self.best
    }

    /// `candidate` is the best edge-arm or an exact duplicate of it.
    pub fn is_correct(&self, candidate: usize) -> bool {
        self.edge_arms.vector(candidate) == self.edge_arms.vector(self.best)
    }

    pub fn run(&self, graph: Graph, sigma: f64, config: LearnerConfig, max_rounds: u64, check_every: u64) -> Result<RunOutcome> {
        let env = Environment::new(self.param.clone(), NoiseModel::gaussian(sigma)?);
        let mut state = LearnerState::with_design(graph, self.arms.clone(), env, config, self.mu.clone())?;
        Ok(state.run(max_rounds, check_every))
    }
}

struct Job {
    kind: GraphKind,
    m: usize,
    d: usize,
    omega: f64,
    rep: usize,
    seed: u64,
}

fn run_jobs(config: &ExperimentConfig, jobs: Vec<Job>, instances: &[((usize, u64), BanditInstance)]) -> Result<Vec<SweepRow>> {
    use rayon::prelude::*;
    let pool = config.thread_pool()?;
    pool.install(|| {
        jobs.into_par_iter()
            .map(|job| {
                let inst = &instances
                    .iter()
                    .find(|((d, w), _)| *d == job.d && *w == job.omega.to_bits())
                    .expect("instance built for every cell")
                    .1;
                let graph = Graph::with_edge_count(job.kind, job.m)?;
                let learner = LearnerConfig {
                    delta: config.delta,
                    seed: job.seed,
                    log_constant: config.log_constant,
                    design: config.design_options(),
                };
                let out = inst.run(graph, config.sigma, learner, config.max_rounds, config.check_every)?;
                Ok(SweepRow {
                    kind: job.kind,
                    m: job.m,
                    d: job.d,
                    omega: job.omega,
                    rep: job.rep,
                    rounds: out.rounds,
                    correct: inst.is_correct(out.candidate),
                    stopped: out.stopped,
                    seed: job.seed,
                })
            })
            .collect()
    })
}

fn build_instances(config: &ExperimentConfig, dims: &[usize]) -> Result<Vec<((usize, u64), BanditInstance)>> {
    let mut out = Vec::new();
    for &d in dims {
        for w in config.omega_values() {
            out.push(((d, w.to_bits()), BanditInstance::new(d, w, config.design_options())?));
        }
    }
    Ok(out)
}

/// Rounds-to-stop against the number of edges at fixed `d`. Rows come back
/// ordered by `(ω, kind, m, rep)`.
pub fn run_sweep_edges(config: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let mut cfg = config.clone();
    cfg.experiment = ExperimentKind::SweepEdges;
    cfg.validate()?;
    let instances = build_instances(&cfg, &[cfg.d])?;
    let mut jobs = Vec::new();
    for omega in cfg.omega_values() {
        for &kind in &cfg.kinds {
            for &m in &cfg.m_grid {
                for rep in 0..cfg.repetitions {
                    jobs.push(Job { kind, m, d: cfg.d, omega, rep, seed: row_seed(cfg.seed, kind, m, rep) });
                }
            }
        }
    }
    run_jobs(&cfg, jobs, &instances)
}

/// Rounds-to-stop against `d` at fixed `m`. Rows come back ordered by
/// `(ω, kind, d, rep)`.
pub fn run_sweep_dimension(config: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let mut cfg = config.clone();
    cfg.experiment = ExperimentKind::SweepDim;
    cfg.validate()?;
    let m = cfg.sweep_dim_m();
    let instances = build_instances(&cfg, &cfg.d_grid)?;
    let mut jobs = Vec::new();
    for omega in cfg.omega_values() {
        for &kind in &cfg.kinds {
            for &d in &cfg.d_grid {
                for rep in 0..cfg.repetitions {
                    jobs.push(Job { kind, m, d, omega, rep, seed: row_seed(cfg.seed, kind, d, rep) });
                }
            }
        }
    }
    run_jobs(&cfg, jobs, &instances)
}

/// Groups consecutive rows sharing `(kind, m, d, ω)`.
pub fn summarize_sweep(rows: &[SweepRow]) -> Vec<SweepSummary> {
    let mut out: Vec<SweepSummary> = Vec::new();
    let mut start = 0;
    while start < rows.len() {
        let r0 = &rows[start];
        let end = start
            + rows[start..]
                .iter()
                .take_while(|r| r.kind == r0.kind && r.m == r0.m && r.d == r0.d && r.omega == r0.omega)
                .count();
        let cell = &rows[start..end];
        let n = cell.len() as f64;
        let mean = cell.iter().map(|r| r.rounds as f64).sum::<f64>() / n;
        let sd = if cell.len() > 1 {
            (cell.iter().map(|r| (r.rounds as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        out.push(SweepSummary {
            kind: r0.kind,
            m: r0.m,
            d: r0.d,
            omega: r0.omega,
            runs: cell.len(),
            mean_rounds: mean,
            sd_rounds: sd,
            accuracy: cell.iter().filter(|r| r.correct).count() as f64 / n,
            exhausted: cell.iter().filter(|r| !r.stopped).count(),
        });
        start = end;
    }
    out
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["kind", "m", "d", "omega", "rep", "rounds", "correct", "stopped", "seed"])?;
    for r in rows {
        wtr.write_record([
            r.kind.to_string(),
            r.m.to_string(),
            r.d.to_string(),
            format!("{}", r.omega),
            r.rep.to_string(),
            r.rounds.to_string(),
            u8::from(r.correct).to_string(),
            u8::from(r.stopped).to_string(),
            r.seed.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_summary_csv<W: Write>(rows: &[SweepSummary], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["kind", "m", "d", "omega", "runs", "mean_rounds", "sd_rounds", "accuracy", "exhausted"])?;
    for r in rows {
        wtr.write_record([
            r.kind.to_string(),
            r.m.to_string(),
            r.d.to_string(),
            format!("{}", r.omega),
            r.runs.to_string(),
            format!("{}", r.mean_rounds),
            format!("{}", r.sd_rounds),
            format!("{}", r.accuracy),
            r.exhausted.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceExperiment {
    pub estimates: Vec<VarianceEstimate>,
    /// Log-log slope per family, when its grid allows a fit.
    pub slopes: Vec<(GraphKind, f64)>,
}

/// `‖Var(A₁)‖` per `(kind, m)` on `n_arms` random unit arms in `ℝᵈ`,
/// sampled from their G-optimal design.
pub fn run_variance_experiment(config: &ExperimentConfig) -> Result<VarianceExperiment> {
    let mut cfg = config.clone();
    cfg.experiment = ExperimentKind::SweepVariance;
    cfg.validate()?;
    let arms = random_unit_arms(cfg.n_arms, cfg.d, cfg.seed)?;
    let mu = frank_wolfe_design(arms.arms(), cfg.design_options())?.distribution;
    let pool = cfg.thread_pool()?;
    let mut estimates = Vec::new();
    let mut slopes = Vec::new();
    for &kind in &cfg.kinds {
        let mut per_kind = Vec::new();
        for &m in &cfg.m_grid {
            let graph = Graph::with_edge_count(kind, m)?;
            let seed = row_seed(cfg.seed, kind, m, 0);
            per_kind.push(pool.install(|| variance_norm_with_bootstrap(&graph, &arms, &mu, cfg.n_samples, cfg.bootstrap, seed))?);
        }
        if check_m_grid(kind, &cfg.m_grid).is_ok() && per_kind.iter().all(|e| e.spectral_norm > 0.0) {
            let x: Vec<f64> = per_kind.iter().map(|e| (e.m as f64).ln()).collect();
            let y: Vec<f64> = per_kind.iter().map(|e| e.spectral_norm.ln()).collect();
            slopes.push((kind, least_squares_line(&x, &y).0));
        }
        estimates.extend(per_kind);
    }
    Ok(VarianceExperiment { estimates, slopes })
}

pub fn write_variance_csv<W: Write>(rows: &[VarianceEstimate], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["kind", "m", "n_samples", "norm", "std_error"])?;
    for r in rows {
        wtr.write_record([
            r.kind.to_string(),
            r.m.to_string(),
            r.n_samples.to_string(),
            format!("{}", r.spectral_norm),
            format!("{}", r.std_error),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            d: 2,
            d_grid: vec![2, 3],
            kinds: vec![GraphKind::Star, GraphKind::Matching],
            m_grid: vec![12, 30],
            omega: Some(FRAC_PI_2),
            repetitions: 3,
            max_rounds: 20_000,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn defaults_and_json_round_trip() {
        let c = ExperimentConfig::default();
        assert_eq!(c.d * c.d, 25);
        assert_eq!(c.repetitions, 100);
        assert_eq!(c.sweep_dim_m(), 156);
        let back = ExperimentConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        let partial = ExperimentConfig::from_json(r#"{"experiment": "sweep-dim", "d_grid": [2, 3]}"#).unwrap();
        assert_eq!(partial.experiment, ExperimentKind::SweepDim);
        assert_eq!(partial.sigma, 1.0);
        assert!(ExperimentConfig::from_json(r#"{"nope": 1}"#).is_err());
    }

    #[test]
    fn shared_grid_is_realizable_everywhere() {
        for kind in GraphKind::FAMILIES {
            for m in SHARED_M_GRID {
                assert!(kind.nodes_for_edges(m).is_some(), "{kind} {m}");
            }
        }
        let c = ExperimentConfig { experiment: ExperimentKind::SweepEdges, ..ExperimentConfig::default() };
        assert!(c.validate().is_ok());
    }

    #[test]
    fn invalid_configs() {
        let base = ExperimentConfig { experiment: ExperimentKind::SweepEdges, ..ExperimentConfig::default() };
        for c in [
            ExperimentConfig { repetitions: 0, ..base.clone() },
            ExperimentConfig { delta: 1.0, ..base.clone() },
            ExperimentConfig { sigma: -0.1, ..base.clone() },
            ExperimentConfig { m_grid: vec![12, 14], ..base.clone() },
            ExperimentConfig { omega: Some(2.0), ..base.clone() },
            ExperimentConfig { experiment: ExperimentKind::SweepDim, m: Some(14), ..base.clone() },
        ] {
            assert!(matches!(c.validate(), Err(GbbError::Config(_))), "{c:?}");
        }
        assert!(run_sweep_edges(&ExperimentConfig { m_grid: vec![11], ..small() }).is_err());
    }

    #[test]
    fn seeds_follow_the_mixing_rule() {
        let s = row_seed(7, GraphKind::Circle, 30, 2);
        assert_eq!(s, splitmix64(splitmix64(splitmix64(7 ^ splitmix64(2)) ^ splitmix64(30)) ^ splitmix64(2)));
        assert_ne!(row_seed(7, GraphKind::Star, 30, 2), s);
        assert_ne!(row_seed(7, GraphKind::Circle, 30, 3), s);
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
    }

    #[test]
    fn sweep_is_ordered_and_reproducible() {
        let cfg = small();
        let rows = run_sweep_edges(&cfg).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 3);
        let keys: Vec<_> = rows.iter().map(|r| (kind_tag(r.kind), r.m, r.rep)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        for r in &rows {
            assert_eq!(r.seed, row_seed(cfg.seed, r.kind, r.m, r.rep));
        }
        let again = run_sweep_edges(&ExperimentConfig { workers: Some(1), ..cfg }).unwrap();
        assert_eq!(rows, again);

        let mut a = Vec::new();
        let mut b = Vec::new();
        write_sweep_csv(&rows, &mut a).unwrap();
        write_sweep_csv(&again, &mut b).unwrap();
        assert_eq!(a, b);
        assert!(String::from_utf8(a).unwrap().starts_with("kind,m,d,omega,rep,rounds,correct,stopped,seed\n"));
    }

    #[test]
    fn noiseless_runs_stop_at_the_first_check() {
        let cfg = ExperimentConfig { sigma: 0.0, check_every: 5, ..small() };
        for row in run_sweep_edges(&cfg).unwrap() {
            assert_eq!(row.rounds, 5);
            assert!(row.correct && row.stopped);
        }
    }

    #[test]
    fn dimension_sweep_rows() {
        let cfg = ExperimentConfig { m: Some(12), repetitions: 2, ..small() };
        let rows = run_sweep_dimension(&cfg).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 2);
        assert!(rows.iter().all(|r| r.m == 12));
        let summary = summarize_sweep(&rows);
        assert_eq!(summary.len(), 4);
        assert!(summary.iter().all(|s| s.runs == 2));
    }

    #[test]
    fn summary_statistics() {
        let row = |rounds, correct| SweepRow {
            kind: GraphKind::Star,
            m: 12,
            d: 2,
            omega: 1.0,
            rep: 0,
            rounds,
            correct,
            stopped: true,
            seed: 0,
        };
        let s = summarize_sweep(&[row(10, true), row(20, false), row(30, true)]);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].mean_rounds, 20.0);
        assert_eq!(s[0].sd_rounds, 10.0);
        assert!((s[0].accuracy - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn variance_experiment_csv() {
        let cfg = ExperimentConfig {
            kinds: vec![GraphKind::Star, GraphKind::Matching],
            m_grid: vec![12, 30, 56],
            d: 2,
            n_arms: 6,
            n_samples: 30,
            bootstrap: 10,
            ..ExperimentConfig::default()
        };
        let out = run_variance_experiment(&cfg).unwrap();
        assert_eq!(out.estimates.len(), 6);
        assert_eq!(out.slopes.len(), 2);
        let mut buf = Vec::new();
        write_variance_csv(&out.estimates, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("kind,m,n_samples,norm,std_error\nstar,12,30,"));
        assert_eq!(out, run_variance_experiment(&cfg).unwrap());
    }
}
