use gbb_core::arms::random_unit_arms;
use gbb_core::design::{frank_wolfe_design, FrankWolfeOptions};
use gbb_core::graph::{Graph, GraphKind};
use gbb_core::variance::{estimate_bound_constants, scaling_slope, table1_bound, variance_norm};

#[test]
fn empirical_variance_respects_family_bounds() {
    let arms = random_unit_arms(30, 3, 11).unwrap();
    let mu = frank_wolfe_design(arms.arms(), FrankWolfeOptions::default()).unwrap().distribution;
    let spec = estimate_bound_constants(&arms, &mu, 20_000, 12).unwrap();
    assert!(spec.p > 0.0 && spec.m > 0.0 && spec.n > 0.0);
    for kind in GraphKind::FAMILIES {
        for m in [12, 20, 30] {
            let graph = Graph::with_edge_count(kind, m).unwrap();
            let est = variance_norm(&graph, &arms, &mu, 2000, 13).unwrap();
            let bound = table1_bound(kind, m, &spec).unwrap();
            assert!(est.spectral_norm <= 1.25 * bound, "{kind} m={m}: {} > 1.25 * {bound}", est.spectral_norm);
        }
    }
}

#[test]
fn star_exceeds_circle_at_equal_edges() {
    let arms = random_unit_arms(100, 5, 21).unwrap();
    let mu = frank_wolfe_design(arms.arms(), FrankWolfeOptions::default()).unwrap().distribution;
    let star = variance_norm(&Graph::with_edge_count(GraphKind::Star, 40).unwrap(), &arms, &mu, 100, 1).unwrap();
    let circle = variance_norm(&Graph::with_edge_count(GraphKind::Circle, 40).unwrap(), &arms, &mu, 100, 1).unwrap();
    assert!(star.spectral_norm > circle.spectral_norm);
    assert!(star.spectral_norm - 2.0 * star.std_error > circle.spectral_norm + 2.0 * circle.std_error);
}

#[test]
fn families_order_by_concentration() {
    let arms = random_unit_arms(100, 5, 31).unwrap();
    let mu = frank_wolfe_design(arms.arms(), FrankWolfeOptions::default()).unwrap().distribution;
    let norms: Vec<f64> = GraphKind::FAMILIES
        .iter()
        .map(|&k| variance_norm(&Graph::with_edge_count(k, 156).unwrap(), &arms, &mu, 100, 2).unwrap().spectral_norm)
        .collect();
    // star, complete, circle, matching
    assert!(norms[0] > norms[1] && norms[1] > norms[2], "{norms:?}");
    assert!(norms[2] >= 0.7 * norms[3], "{norms:?}");
}

#[test]
fn slope_fit_rejects_bad_grids() {
    assert!(scaling_slope(GraphKind::Complete, &[12, 30, 50], 2, 4, 10, 0).is_err());
    assert!(scaling_slope(GraphKind::Star, &[12, 30], 2, 4, 10, 0).is_err());
    let fit = scaling_slope(GraphKind::Matching, &[12, 30, 56], 2, 4, 50, 0).unwrap();
    assert_eq!(fit.estimates.len(), 3);
    assert!(fit.slope.is_finite());
}
