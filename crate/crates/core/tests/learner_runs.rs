use std::f64::consts::FRAC_PI_2;

use gbb_core::arms::{soare_arm_set, EdgeArmSet};
use gbb_core::design::FrankWolfeOptions;
use gbb_core::environment::{soare_parameter, Environment, NoiseModel};
use gbb_core::experiment::BanditInstance;
use gbb_core::graph::Graph;
use gbb_core::learner::{
    min_gap, sample_complexity_upper_bound, worst_case_lower_bound, write_run_log, BoundInputs, LearnerConfig,
    LearnerState,
};

fn soare_env(d: usize, sigma: f64) -> Environment {
    Environment::new(soare_parameter(d).unwrap(), NoiseModel::gaussian(sigma).unwrap())
}

#[test]
fn easy_instance_is_solved_reliably() {
    let inst = BanditInstance::new(2, FRAC_PI_2 - 0.01, FrankWolfeOptions::default()).unwrap();
    let correct = (0..100)
        .filter(|&seed| {
            let cfg = LearnerConfig { seed, ..LearnerConfig::default() };
            let out = inst.run(Graph::circle(10).unwrap(), 1.0, cfg, 100_000, 10).unwrap();
            out.stopped && inst.is_correct(out.candidate)
        })
        .count();
    assert!(correct >= 90, "{correct}/100");
}

#[test]
fn right_angle_duplicates_still_terminate() {
    let cfg = LearnerConfig { seed: 4, ..LearnerConfig::default() };
    let mut s = LearnerState::init(Graph::circle(10).unwrap(), soare_arm_set(2, FRAC_PI_2).unwrap(), soare_env(2, 1.0), cfg).unwrap();
    let out = s.run(100_000, 10);
    assert!(out.stopped);
    let best = min_gap(s.edge_arms(), s.environment().param.theta()).unwrap().0;
    assert_eq!(s.edge_arms().vector(out.candidate), s.edge_arms().vector(best));
}

#[test]
fn budget_exhaustion_is_flagged() {
    let cfg = LearnerConfig { seed: 1, ..LearnerConfig::default() };
    let mut s = LearnerState::init(Graph::circle(6).unwrap(), soare_arm_set(3, 0.1).unwrap(), soare_env(3, 1.0), cfg).unwrap();
    let out = s.run(25, 10);
    assert!(out.budget_exhausted());
    assert_eq!(out.rounds, 25);
    // checks at 10, 20 and the budget
    assert_eq!(out.history.iter().map(|h| h.round).collect::<Vec<_>>(), vec![10, 20, 25]);

    let mut buf = Vec::new();
    write_run_log(&out.history, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("round,candidate,worst_margin,relative_alpha,wall_time\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn equal_seeds_reproduce_runs() {
    let make = || {
        let cfg = LearnerConfig { seed: 99, ..LearnerConfig::default() };
        LearnerState::init(Graph::star(7).unwrap(), soare_arm_set(3, 0.7).unwrap(), soare_env(3, 1.0), cfg).unwrap()
    };
    let (mut a, mut b) = (make(), make());
    assert_eq!(a.mu(), b.mu());
    a.step();
    b.step();
    assert_eq!(a.last_draw(), b.last_draw());
    let (ra, rb) = (a.run(5_000, 10), b.run(5_000, 10));
    assert_eq!((ra.candidate, ra.rounds, ra.stopped), (rb.candidate, rb.rounds, rb.stopped));
    assert_eq!(a.estimate(), b.estimate());
}

#[test]
fn stopping_time_sits_between_the_bounds() {
    let d = 2;
    let inst = BanditInstance::new(d, 1.0, FrankWolfeOptions::default()).unwrap();
    let graph = Graph::circle(10).unwrap();
    let m = graph.n_edges();
    let gap = min_gap(&EdgeArmSet::new(inst.arms.clone()), inst.param.theta()).unwrap().1;
    let inputs = BoundInputs { d, sigma: 1.0, delta: 0.1, m, k: inst.arms.len(), gap_min: gap };
    let lower = worst_case_lower_bound(&inputs).unwrap();
    for seed in 0..10 {
        let cfg = LearnerConfig { seed, ..LearnerConfig::default() };
        let out = inst.run(graph.clone(), 1.0, cfg, 100_000, 1).unwrap();
        assert!(out.stopped);
        let t = out.rounds as f64;
        let alpha = out.history.last().unwrap().relative_error.max(0.0);
        let upper = sample_complexity_upper_bound(&inputs, alpha, t).unwrap();
        assert!(t <= upper, "t = {t} > {upper}");
        assert!(t >= lower, "t = {t} < {lower}");
    }
}
