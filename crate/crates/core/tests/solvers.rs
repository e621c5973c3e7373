mod common;

use ndarray::{Array1, Array2};
use rand::Rng;

use fairgraph::admm::{admm_solve_penalized, round_assignment, AdmmConfig};
use fairgraph::metrics::{ami, score_report};
use fairgraph::numerics::{kmeans_fit, power_iteration, sym_eig};
use fairgraph::sbm::{
    generate_sbm, generate_weighted_two_cluster, sample_sensitive, SbmParams, WeightedTwoClusterParams,
};
use fairgraph::spectral::{
    build_penalized, fair_spectral, fair_spectral_binary, objective_value, MultiKStrategy, SolverConfig,
};
use fairgraph::sweep::{linspace, run_sweep, SweepSpec};
use fairgraph::{ClusterAssignment, Graph, SensitiveAttributes};

use common::*;

fn fig1(seed: u64) -> (Graph, ClusterAssignment, SensitiveAttributes) {
    let (g, truth) =
        generate_weighted_two_cluster(&WeightedTwoClusterParams::new((20, 10), (0.5, 1.0), (0.0, 0.5), seed)).unwrap();
    let s = sample_sensitive(g.n(), 0.5, seed + 77).unwrap();
    (g, truth, s)
}

fn solve(g: &Graph, s: &SensitiveAttributes, cfg: &SolverConfig) -> ClusterAssignment {
    fair_spectral(&build_penalized(g, s, cfg).unwrap(), cfg).unwrap()
}

#[test]
fn lambda_zero_ignores_attributes() {
    let (g, _) = generate_sbm(&SbmParams::planted((25, 35), 0.7, 0.1, 4)).unwrap();
    for cfg in [
        SolverConfig::binary(0.0, 1.0),
        SolverConfig::binary(0.0, 0.5).with_k(3, MultiKStrategy::LaplacianKMeans).with_seed(9),
        SolverConfig::binary(0.0, 0.5).with_k(3, MultiKStrategy::RecursiveBisection),
    ] {
        let reference = solve(&g, &sample_sensitive(g.n(), 0.5, 0).unwrap(), &cfg);
        for seed in 1..6 {
            let s = sample_sensitive(g.n(), 0.3, seed).unwrap();
            assert_eq!(solve(&g, &s, &cfg), reference);
        }
    }
}

#[test]
fn three_block_sbm_recovered() {
    let mut scores = Vec::new();
    for seed in 0..10 {
        let psi = Array2::from_shape_fn((3, 3), |(a, b)| if a == b { 0.9 } else { 0.05 });
        let (g, truth) = generate_sbm(&SbmParams {
            sizes: vec![100, 100, 100],
            psi,
            seed,
        })
        .unwrap();
        let s = sample_sensitive(g.n(), 0.5, seed).unwrap();
        let cfg = SolverConfig::binary(0.0, 0.1).with_k(3, MultiKStrategy::LaplacianKMeans).with_seed(seed);
        scores.push(ami(truth.labels(), solve(&g, &s, &cfg).labels()).unwrap());
    }
    assert!(scores.iter().all(|&a| a >= 0.95), "{scores:?}");
}

#[test]
fn weighted_family_follows_communities_without_penalty() {
    for seed in 0..5 {
        let (g, truth, s) = fig1(seed);
        let pred = solve(&g, &s, &SolverConfig::binary(0.0, 1.0));
        assert_eq!(ami(truth.labels(), pred.labels()).unwrap(), 1.0, "seed {seed}");
    }
}

#[test]
fn weighted_family_follows_attribute_under_penalty() {
    for seed in 0..5 {
        let (g, truth, s) = fig1(seed);
        let pred = solve(&g, &s, &SolverConfig::binary(-0.4, 1.0));
        let temporal = ami(truth.labels(), pred.labels()).unwrap();
        let specificity = ami(&s.group_labels(), pred.labels()).unwrap();
        assert!(specificity > temporal, "seed {seed}: {specificity} vs {temporal}");
    }
}

#[test]
fn weighted_family_has_intermediate_tradeoff_points() {
    let mut found = 0;
    for seed in 0..5 {
        let (g, truth, s) = fig1(seed);
        let hit = linspace(-1.0, 1.0, 81).into_iter().any(|l| {
            let cfg = SolverConfig::binary(l, 1.0);
            let m = build_penalized(&g, &s, &cfg).unwrap();
            let pred = fair_spectral_binary(&m).unwrap();
            let r = score_report(&pred, Some(truth.labels()), &s, Some(&m)).unwrap();
            let t = r.temporal.unwrap().ami;
            let sp = r.specificity.ami;
            t > 0.0 && t < 1.0 && sp > 0.0 && sp < 1.0
        });
        found += usize::from(hit);
    }
    assert!(found > 0);
}

#[test]
fn spectral_never_beats_brute_force() {
    let mut r = rng(12);
    let mut balanced_checked = 0;
    for seed in 0..20u64 {
        let sizes = (r.random_range(2..=6), r.random_range(2..=6));
        let (g, _) = generate_sbm(&SbmParams::planted(sizes, 0.8, 0.15, seed)).unwrap();
        let s = sample_sensitive(g.n(), 0.5, seed).unwrap();
        let lambda = r.random_range(-0.6..0.6);
        let m = build_penalized(&g, &s, &SolverConfig::binary(lambda, 1.0)).unwrap();
        let pred = fair_spectral_binary(&m).unwrap();
        let v = objective_value(&m, &pred).unwrap();
        assert!(v <= brute_force_max(&m.matrix) + 1e-9);
        let n = g.n();
        let plus = pred.labels().iter().filter(|&&l| l == 1).count();
        if 2 * plus == n {
            // among balanced sign vectors the solution can't beat the balanced max either
            let best = (0u32..1 << n)
                .filter(|m| m.count_ones() as usize * 2 == n)
                .map(|mask| {
                    let l: Vec<usize> = (0..n).map(|i| (mask >> i & 1) as usize).collect();
                    signs_value(&m.matrix, &l)
                })
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(v <= best + 1e-9);
            balanced_checked += 1;
        }
    }
    assert!(balanced_checked > 0);
}

#[test]
fn kmeans_finds_global_wcss_optimum_on_blobs() {
    let xs = [0.0, 0.3, 0.5, 0.9, 10.0, 10.2, 10.7, 11.0, 20.0, 20.1, 20.4, 20.8];
    let rows = Array2::from_shape_fn((12, 1), |(i, _)| xs[i]);
    let fit = kmeans_fit(&rows, 3, 10, 1).unwrap();
    let wcss = |labels: &[usize]| {
        (0..3)
            .map(|c| {
                let pts: Vec<f64> = xs.iter().zip(labels).filter(|(_, &l)| l == c).map(|(&x, _)| x).collect();
                if pts.is_empty() {
                    return 0.0;
                }
                let m = pts.iter().sum::<f64>() / pts.len() as f64;
                pts.iter().map(|x| (x - m).powi(2)).sum::<f64>()
            })
            .sum::<f64>()
    };
    let mut best = f64::INFINITY;
    let mut labels = vec![0usize; 12];
    for code in 0..3usize.pow(12) {
        let mut c = code;
        for l in labels.iter_mut() {
            *l = c % 3;
            c /= 3;
        }
        best = best.min(wcss(&labels));
    }
    assert!((fit.wcss - best).abs() < 1e-9);
    let blobs: Vec<usize> = (0..12).map(|i| i / 4).collect();
    assert!((wcss(&blobs) - best).abs() < 1e-12);
    assert_eq!(fit.assignment.canonical().labels(), blobs.as_slice());
}

#[test]
fn power_iteration_agrees_with_dense_solver() {
    let mut r = rng(3);
    for _ in 0..10 {
        let x = Array2::from_shape_fn((10, 6), |_| r.random_range(-1.0..1.0));
        let m = x.dot(&x.t());
        let (value, v) = power_iteration(&m, 1e-12, 100_000).unwrap();
        let eig = sym_eig(&m).unwrap();
        let top = eig.eigenvectors.column(0);
        assert!((value - eig.eigenvalues[0]).abs() < 1e-8 * eig.eigenvalues[0]);
        let overlap: f64 = v.iter().zip(top.iter()).map(|(a, b)| a * b).sum();
        assert!((overlap.abs() - 1.0).abs() < 1e-6);
        let residual: Array1<f64> = m.dot(&v) - &v * value;
        assert!(residual.iter().map(|x| x * x).sum::<f64>().sqrt() < 1e-8 * frob(&m));
    }
}

fn frob(m: &Array2<f64>) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[test]
fn admm_split_residual_shrinks() {
    for seed in 0..6u64 {
        let (g, _) = if seed % 2 == 0 {
            generate_sbm(&SbmParams::planted((12, 18), 0.8, 0.1, seed)).unwrap()
        } else {
            let (g, _, _) = fig1(seed);
            (g, ClusterAssignment::from_labels(vec![0]).unwrap())
        };
        let s = sample_sensitive(g.n(), 0.5, seed).unwrap();
        let cfg = SolverConfig::binary(-0.1, 1.0);
        let m = build_penalized(&g, &s, &cfg).unwrap();
        let mut admm = AdmmConfig::new(cfg).with_max_iter(500);
        admm.tol = 1e-300;
        let sol = admm_solve_penalized(&m, &admm).unwrap();
        let at = |it: usize| sol.trace.iter().find(|r| r.iteration == it).unwrap().residual_split;
        assert!(at(500) < at(50), "seed {seed}: {} vs {}", at(500), at(50));
    }
}

#[test]
fn admm_matches_spectral_on_weighted_family() {
    for seed in 0..4 {
        let (g, _, s) = fig1(seed);
        let cfg = SolverConfig::binary(0.0, 1.0);
        let m = build_penalized(&g, &s, &cfg).unwrap();
        let spectral = fair_spectral_binary(&m).unwrap();
        let sol = admm_solve_penalized(&m, &AdmmConfig::new(cfg).with_max_iter(500)).unwrap();
        assert_eq!(round_assignment(&sol.state).unwrap().canonical(), spectral.canonical());
    }
}

#[test]
fn fairness_pressure_raises_specificity() {
    // mean over seeds of specificity AMI at lambda = 0 and at the most
    // negative lambda that still splits the graph
    let (mut at_zero, mut at_edge) = (0.0, 0.0);
    let seeds = 10;
    for seed in 0..seeds {
        let (g, truth) = generate_sbm(&SbmParams::planted((1000, 1000), 0.90, 0.05, seed)).unwrap();
        let s = sample_sensitive(g.n(), 0.5, seed + 1000).unwrap();
        let mut spec = SweepSpec::new(g, s, Some(truth.into_labels()));
        spec.lambda_grid = linspace(-1.0, 0.0, 21);
        spec.mu_values = vec![1.0];
        spec.seeds = vec![seed];
        let pts = run_sweep(&spec).unwrap();
        let zero = pts.iter().find(|p| p.lambda == 0.0).unwrap();
        let edge = pts.iter().find(|p| !p.degenerate).unwrap();
        at_zero += zero.specificity_ami / seeds as f64;
        at_edge += edge.specificity_ami / seeds as f64;
    }
    assert!(at_zero <= at_edge, "{at_zero} vs {at_edge}");
}

#[test]
fn sweep_is_deterministic_and_ordered() {
    let (g, truth, s) = fig1(2);
    let mut spec = SweepSpec::new(g, s, Some(truth.into_labels()));
    spec.lambda_grid = vec![-0.5, 0.0, 0.25];
    spec.seeds = vec![3, 1];
    let a = run_sweep(&spec).unwrap();
    assert_eq!(a, run_sweep(&spec).unwrap());
    let keys: Vec<(f64, f64, u64)> = a.iter().map(|p| (p.mu, p.lambda, p.seed)).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.cmp(&y.2)));
    assert_eq!(keys, sorted);
    assert_eq!(a.len(), 2 * 3 * 2);
    for p in a.iter().filter(|p| p.degenerate) {
        assert_eq!((p.temporal_ami, p.specificity_ami), (0.0, 0.0));
    }
}
