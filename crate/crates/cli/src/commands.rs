use std::f64::consts::FRAC_PI_2;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use gbb_core::allocation::{bipartite_allocation, brute_force_extremes, RewardSummary};
use gbb_core::arms::{random_unit_arms, soare_arm_set, NodeArmSet};
use gbb_core::design::frank_wolfe_design;
use gbb_core::environment::{augment, augment_arm_set, global_reward, read_beta_csv, soare_parameter, symmetrize, BilinearParameter};
use gbb_core::experiment::{
    run_sweep_dimension, run_sweep_edges, run_variance_experiment, summarize_sweep, write_summary_csv,
    write_sweep_csv, write_variance_csv, ExperimentKind, BanditInstance,
};
use gbb_core::learner::{write_run_log, LearnerConfig};
use gbb_core::variance::variance_norm_with_bootstrap;
use gbb_core::{ExperimentConfig, GbbError, Graph, GraphKind};
use serde::Serialize;

use crate::manifest::{self, RunClock};
use crate::CommonArgs;

fn config_err(msg: impl Into<String>) -> anyhow::Error {
    GbbError::Config(msg.into()).into()
}

/// Config file (or defaults) overridden by command-line flags.
pub fn load_config(args: &CommonArgs, kind: ExperimentKind) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.experiment = kind;
    let sweep = matches!(kind, ExperimentKind::SweepEdges | ExperimentKind::SweepDim | ExperimentKind::SweepVariance);
    if let Some(g) = &args.graph {
        match g.parse::<GraphKind>() {
            Ok(GraphKind::Custom) => return Err(config_err("--graph file needs a path; pass the edge-list path directly")),
            Ok(k) if sweep => cfg.kinds = vec![k],
            Ok(k) => cfg.graph = k,
            Err(_) if sweep => return Err(config_err(format!("sweeps take a graph family, got '{g}'"))),
            Err(_) => {
                cfg.graph = GraphKind::Custom;
                cfg.graph_path = Some(PathBuf::from(g));
            }
        }
    }
    if let Some(m) = args.m {
        if kind == ExperimentKind::SweepEdges || kind == ExperimentKind::SweepVariance {
            cfg.m_grid = vec![m];
        } else {
            cfg.m = Some(m);
        }
    }
    macro_rules! set {
        ($($flag:ident => $field:ident),*) => {$(
            if let Some(v) = args.$flag.clone() {
                cfg.$field = v;
            }
        )*};
    }
    set!(seed => seed, reps => repetitions, d => d, sigma => sigma, delta => delta, max_rounds => max_rounds,
         check_every => check_every, tol => tol, k => n_arms, samples => n_samples);
    if args.omega.is_some() {
        cfg.omega = args.omega;
    }
    if args.workers.is_some() {
        cfg.workers = args.workers;
    }
    if args.n_nodes.is_some() {
        cfg.n_nodes = args.n_nodes;
    }
    if args.out.is_some() {
        cfg.output = args.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(cfg: &ExperimentConfig) -> Result<PathBuf> {
    let dir = cfg.output.clone().unwrap_or_else(|| PathBuf::from("results").join(cfg.experiment.as_str()));
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    Ok(BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    std::fs::write(dir.join(name), serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

fn graph_for(cfg: &ExperimentConfig) -> Result<Graph> {
    if cfg.graph == GraphKind::Custom {
        let path = cfg.graph_path.as_ref().ok_or_else(|| config_err("custom graph needs graph_path"))?;
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        return Ok(Graph::read_edge_list(std::io::BufReader::new(file))?);
    }
    Ok(match (cfg.n_nodes, cfg.m) {
        (Some(n), _) => Graph::of_kind(cfg.graph, n)?,
        (None, Some(m)) => Graph::with_edge_count(cfg.graph, m)?,
        (None, None) => Graph::of_kind(cfg.graph, 10)?,
    })
}

/// Node-arms from `--arms`, else the Soare set in dimension `d`.
fn arms_for(args: &CommonArgs, cfg: &ExperimentConfig) -> Result<NodeArmSet> {
    Ok(match &args.arms {
        Some(path) => NodeArmSet::from_csv_path(path)?,
        None => soare_arm_set(cfg.d, cfg.omega.unwrap_or(FRAC_PI_2))?,
    })
}

/// Parameter from `--m-matrix` (default: the Soare parameter), with the
/// arms augmented when `--beta` is given.
fn problem_for(args: &CommonArgs, arms: NodeArmSet) -> Result<(NodeArmSet, BilinearParameter)> {
    let param = match &args.m_matrix {
        Some(path) => BilinearParameter::from_csv_path(path)?,
        None => soare_parameter(arms.dim())?,
    };
    match &args.beta {
        Some(path) => {
            let beta = read_beta_csv(File::open(path).with_context(|| format!("opening {}", path.display()))?)?;
            Ok((augment_arm_set(&arms)?, augment(param.matrix(), &beta)?))
        }
        None => Ok((arms, param)),
    }
}

fn finish(clock: &RunClock, cfg: &ExperimentConfig, dir: &Path, outputs: &[&str]) -> Result<()> {
    let m = clock.finish(cfg.experiment.as_str(), cfg, outputs.iter().map(|s| s.to_string()).collect());
    manifest::write(&m, dir)
}

pub fn design(args: &CommonArgs) -> Result<()> {
    let clock = RunClock::start();
    let cfg = load_config(args, ExperimentKind::Design)?;
    let arms = arms_for(args, &cfg)?;
    let report = frank_wolfe_design(arms.arms(), cfg.design_options())?;
    let dir = out_dir(&cfg)?;
    let json = report.to_json()?;
    std::fs::write(dir.join("design.json"), json.clone() + "\n")?;
    println!("{json}");
    finish(&clock, &cfg, &dir, &["design.json"])
}

#[derive(Serialize)]
struct LearnResult {
    candidate: usize,
    left_arm: usize,
    right_arm: usize,
    rounds: u64,
    stopped: bool,
    correct: bool,
    symmetrized: bool,
    n_nodes: usize,
    m: usize,
}

pub fn learn(args: &CommonArgs) -> Result<()> {
    let clock = RunClock::start();
    let cfg = load_config(args, ExperimentKind::Learn)?;
    let graph = graph_for(&cfg)?;
    let (arms, mut param) = problem_for(args, arms_for(args, &cfg)?)?;
    let symmetrized = !param.is_symmetric(1e-12);
    if symmetrized {
        eprintln!("note: parameter is not symmetric; learning M + Mᵀ");
        param = symmetrize(param.matrix())?;
    }
    let inst = BanditInstance::from_parts(arms, param, cfg.design_options())?;
    let learner = LearnerConfig { delta: cfg.delta, seed: cfg.seed, log_constant: cfg.log_constant, design: cfg.design_options() };
    let (n_nodes, m) = (graph.n_nodes(), graph.n_edges());
    let out = inst.run(graph, cfg.sigma, learner, cfg.max_rounds, cfg.check_every)?;

    let dir = out_dir(&cfg)?;
    write_run_log(&out.history, create(&dir, "run_log.csv")?)?;
    let k = inst.arms.len();
    let result = LearnResult {
        candidate: out.candidate,
        left_arm: out.candidate / k,
        right_arm: out.candidate % k,
        rounds: out.rounds,
        stopped: out.stopped,
        correct: inst.is_correct(out.candidate),
        symmetrized,
        n_nodes,
        m,
    };
    write_json(&dir, "result.json", &result)?;
    println!("{}", serde_json::to_string(&result)?);
    finish(&clock, &cfg, &dir, &["run_log.csv", "result.json"])
}

#[derive(Serialize)]
struct AllocationResult {
    star_pair: (usize, usize),
    crossing_edges: usize,
    reward: f64,
    /// Absent when exhaustive search is too large.
    extremes: Option<RewardSummary>,
}

pub fn allocate(args: &CommonArgs) -> Result<()> {
    let clock = RunClock::start();
    let cfg = load_config(args, ExperimentKind::Allocate)?;
    let graph = graph_for(&cfg)?;
    let (arms, param) = problem_for(args, arms_for(args, &cfg)?)?;
    // non-symmetric parameters are allocated through M + Mᵀ and scored on M
    let alloc = if param.is_symmetric(1e-12) {
        bipartite_allocation(&graph, &arms, param.matrix())?
    } else {
        bipartite_allocation(&graph, &arms, symmetrize(param.matrix())?.matrix())?
    };
    let reward = global_reward(&alloc.assignment, &graph, &arms, &param)?;
    let extremes = match brute_force_extremes(&graph, &arms, &param) {
        Ok(ext) => Some(RewardSummary::new(reward, ext.best, ext.worst)),
        Err(GbbError::TooLarge(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let dir = out_dir(&cfg)?;
    alloc.write_csv(create(&dir, "allocation.csv")?)?;
    let result = AllocationResult { star_pair: alloc.star_pair, crossing_edges: alloc.crossing_edges(&graph), reward, extremes };
    write_json(&dir, "summary.json", &result)?;
    println!("{}", serde_json::to_string(&result)?);
    finish(&clock, &cfg, &dir, &["allocation.csv", "summary.json"])
}

pub fn variance(args: &CommonArgs) -> Result<()> {
    let clock = RunClock::start();
    let mut cfg = load_config(args, ExperimentKind::Variance)?;
    if cfg.graph != GraphKind::Custom && cfg.m.is_none() && cfg.n_nodes.is_none() {
        cfg.m = Some(56);
    }
    let graph = graph_for(&cfg)?;
    let arms = match &args.arms {
        Some(path) => NodeArmSet::from_csv_path(path)?,
        None => random_unit_arms(cfg.n_arms, cfg.d, cfg.seed)?,
    };
    let mu = frank_wolfe_design(arms.arms(), cfg.design_options())?.distribution;
    let est = variance_norm_with_bootstrap(&graph, &arms, &mu, cfg.n_samples, cfg.bootstrap, cfg.seed)?;
    let dir = out_dir(&cfg)?;
    write_variance_csv(std::slice::from_ref(&est), create(&dir, "variance.csv")?)?;
    println!("{}", serde_json::to_string(&est)?);
    finish(&clock, &cfg, &dir, &["variance.csv"])
}

fn sweep(args: &CommonArgs, kind: ExperimentKind) -> Result<()> {
    let clock = RunClock::start();
    let cfg = load_config(args, kind)?;
    let rows = match kind {
        ExperimentKind::SweepEdges => run_sweep_edges(&cfg)?,
        _ => run_sweep_dimension(&cfg)?,
    };
    let summary = summarize_sweep(&rows);
    let dir = out_dir(&cfg)?;
    write_sweep_csv(&rows, create(&dir, "runs.csv")?)?;
    write_summary_csv(&summary, create(&dir, "summary.csv")?)?;
    for s in &summary {
        println!(
            "{:<9} m={:<4} d={} omega={:.3} mean_rounds={:.1} sd={:.1} accuracy={:.3} exhausted={}",
            s.kind.as_str(),
            s.m,
            s.d,
            s.omega,
            s.mean_rounds,
            s.sd_rounds,
            s.accuracy,
            s.exhausted
        );
    }
    finish(&clock, &cfg, &dir, &["runs.csv", "summary.csv"])
}

pub fn sweep_edges(args: &CommonArgs) -> Result<()> {
    sweep(args, ExperimentKind::SweepEdges)
}

pub fn sweep_dim(args: &CommonArgs) -> Result<()> {
    sweep(args, ExperimentKind::SweepDim)
}

pub fn sweep_variance(args: &CommonArgs) -> Result<()> {
    let clock = RunClock::start();
    let cfg = load_config(args, ExperimentKind::SweepVariance)?;
    let out = run_variance_experiment(&cfg)?;
    let dir = out_dir(&cfg)?;
    write_variance_csv(&out.estimates, create(&dir, "variance.csv")?)?;
    for (kind, slope) in &out.slopes {
        println!("{:<9} slope={slope:.3}", kind.as_str());
    }
    write_json(&dir, "slopes.json", &out.slopes)?;
    finish(&clock, &cfg, &dir, &["variance.csv", "slopes.json"])
}
