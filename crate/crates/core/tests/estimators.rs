//! Statistical behaviour of the offline estimators: degenerate exactness,
//! unbiasedness across seeds, the variance bound, and tail coverage.

mod common;

use common::{motif_zoo, random_graph, rng};
use tempomotif_core::exact::exact_count;
use tempomotif_core::motif::MotifClass;
use tempomotif_core::offline::{
    es_estimate, ews_estimate, suggested_edge_probability, variance_bound, Estimate,
    EstimatorConfig, EstimatorKind,
};
use tempomotif_core::{TemporalGraph, TemporalMotif};

const TRIALS: u64 = 1000;

fn trial_values<F>(base_seed: u64, mut run: F) -> Vec<f64>
where
    F: FnMut(u64) -> Estimate,
{
    (0..TRIALS).map(|i| run(base_seed + i).value).collect()
}

fn mean_and_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

#[test]
fn full_probability_is_exact_everywhere() {
    let mut r = rng(0xE50);
    for _ in 0..5 {
        let g = random_graph(&mut r, 6, 80, 20);
        for (name, motif) in motif_zoo() {
            let delta = 8;
            let exact = exact_count(&g, &motif, delta).unwrap() as f64;
            let cfg = EstimatorConfig::new(delta, 1.0, 1.0, 42);
            let es = es_estimate(&g, &motif, &cfg).unwrap();
            assert_eq!(es.value, exact, "es {name}");
            if motif.class() != MotifClass::Generic {
                let ews = ews_estimate(&g, &motif, &cfg).unwrap();
                assert_eq!(ews.value, exact, "ews {name}");
            }
        }
    }
}

/// Shared setup: a moderate graph with a healthy triangle count.
fn test_graph_and_motifs() -> (TemporalGraph, TemporalMotif, TemporalMotif) {
    let mut r = rng(0xE51);
    let g = random_graph(&mut r, 12, 500, 120);
    let tri = TemporalMotif::parse("3 3\n0 1\n1 2\n2 0\n").unwrap();
    let star = TemporalMotif::parse("3 3\n0 1\n0 2\n0 1\n").unwrap();
    (g, tri, star)
}

#[test]
fn edge_sampling_is_unbiased_within_tolerance() {
    let (g, tri, _) = test_graph_and_motifs();
    let delta = 30;
    let exact = exact_count(&g, &tri, delta).unwrap() as f64;
    assert!(exact > 50.0, "need a meaningful count, got {exact}");

    let p = 0.3;
    let cfg0 = EstimatorConfig::new(delta, p, 1.0, 0);
    let values = trial_values(1000, |seed| {
        let cfg = EstimatorConfig::new(delta, p, 1.0, seed);
        es_estimate(&g, &tri, &cfg).unwrap()
    });
    let (mean, var) = mean_and_var(&values);
    let bound = variance_bound(EstimatorKind::EdgeSampling, &cfg0, exact).unwrap();

    // Mean of `TRIALS` independent estimates has sd <= sqrt(bound/TRIALS).
    let tol = 3.0 * (bound / TRIALS as f64).sqrt();
    assert!(
        (mean - exact).abs() <= tol,
        "mean {mean} vs exact {exact}, tolerance {tol}"
    );
    // The analytic bound dominates the observed variance (sampling slack 10%).
    assert!(
        var <= bound * 1.1,
        "observed variance {var} exceeds bound {bound}"
    );
}

#[test]
fn wedge_sampling_is_unbiased_within_tolerance() {
    let (g, tri, star) = test_graph_and_motifs();
    let delta = 30;
    for (name, motif) in [("triangle", &tri), ("star", &star)] {
        let exact = exact_count(&g, motif, delta).unwrap() as f64;
        assert!(exact > 50.0, "{name}: need a meaningful count, got {exact}");

        let (p, q) = (0.5, 0.6);
        let cfg0 = EstimatorConfig::new(delta, p, q, 0);
        let values = trial_values(7000, |seed| {
            let cfg = EstimatorConfig::new(delta, p, q, seed);
            ews_estimate(&g, motif, &cfg).unwrap()
        });
        let (mean, var) = mean_and_var(&values);
        let bound = variance_bound(EstimatorKind::EdgeWedgeSampling, &cfg0, exact).unwrap();
        let tol = 3.0 * (bound / TRIALS as f64).sqrt();
        assert!(
            (mean - exact).abs() <= tol,
            "{name}: mean {mean} vs exact {exact}, tolerance {tol}"
        );
        assert!(
            var <= bound * 1.1,
            "{name}: variance {var} exceeds bound {bound}"
        );
    }
}

#[test]
fn chebyshev_coverage_from_suggested_probability() {
    // Choosing p = 1 / (1 + gamma * eps^2) caps the probability of a relative
    // error of eps or more at gamma. Check the empirical failure rate.
    let (g, tri, _) = test_graph_and_motifs();
    let delta = 30;
    let exact = exact_count(&g, &tri, delta).unwrap() as f64;

    let (eps, gamma) = (0.5, 0.2);
    let p = suggested_edge_probability(eps, gamma).unwrap();
    assert!((p - 1.0 / (1.0 + gamma * eps * eps)).abs() < 1e-12);

    let values = trial_values(3000, |seed| {
        let cfg = EstimatorConfig::new(delta, p, 1.0, seed);
        es_estimate(&g, &tri, &cfg).unwrap()
    });
    let failures = values
        .iter()
        .filter(|v| (**v - exact).abs() >= eps * exact)
        .count();
    let rate = failures as f64 / TRIALS as f64;
    // Allow binomial noise on top of the guarantee: sd ~ sqrt(g(1-g)/n).
    let slack = 3.0 * (gamma * (1.0 - gamma) / TRIALS as f64).sqrt();
    assert!(
        rate <= gamma + slack,
        "failure rate {rate} above {gamma} + {slack}"
    );
}

#[test]
fn wedge_stage_reduces_to_edge_sampling_when_kept_whole() {
    let mut r = rng(0xE52);
    for round in 0..4 {
        let g = random_graph(&mut r, 8, 150, 40);
        let tri = TemporalMotif::parse("3 3\n0 1\n1 2\n2 0\n").unwrap();
        for seed in 0..10 {
            let cfg = EstimatorConfig::new(12, 0.4, 1.0, seed);
            let a = es_estimate(&g, &tri, &cfg).unwrap();
            let b = ews_estimate(&g, &tri, &cfg).unwrap();
            assert_eq!(
                a.value.to_bits(),
                b.value.to_bits(),
                "round {round} seed {seed}: same kept edges must give identical estimates"
            );
            assert_eq!(a.sampled_edges, b.sampled_edges);
        }
    }
}
