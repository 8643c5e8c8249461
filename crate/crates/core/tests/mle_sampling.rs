use std::f64::consts::PI;

use qfreq::dfs::{dfs_precision_bound, ImperfectionModel, TargetParam};
use qfreq::mle::{
    dfs_ml_estimate, dfs_uncertainty, nu_e_distribution, simulate_nu_e, ExperimentBudget,
};
use qfreq::symstate::LaserFreqs;

fn imp() -> ImperfectionModel {
    ImperfectionModel::new(0.6, 0.98, 0.99).unwrap()
}

/// χ² of observed counts against expected probabilities, merging sparse
/// bins; returns (statistic, degrees of freedom).
fn chi_square(samples: &[u64], probs: &[f64]) -> (f64, usize) {
    let total = samples.len() as f64;
    let mut observed = vec![0.0; probs.len()];
    for &s in samples {
        observed[s as usize] += 1.0;
    }
    let (mut stat, mut bins) = (0.0, 0usize);
    let (mut o_acc, mut e_acc) = (0.0, 0.0);
    for (o, p) in observed.iter().zip(probs) {
        o_acc += o;
        e_acc += p * total;
        if e_acc >= 10.0 {
            stat += (o_acc - e_acc).powi(2) / e_acc;
            bins += 1;
            o_acc = 0.0;
            e_acc = 0.0;
        }
    }
    if e_acc > 0.0 {
        stat += (o_acc - e_acc).powi(2) / e_acc;
        bins += 1;
    }
    (stat, bins - 1)
}

fn assert_consistent(samples: &[u64], probs: &[f64]) {
    let (stat, dof) = chi_square(samples, probs);
    let limit = dof as f64 + 3.0 * (2.0 * dof as f64).sqrt();
    assert!(stat < limit, "χ² = {stat} with {dof} dof");
}

#[test]
fn sampled_parities_follow_distribution() {
    let b = ExperimentBudget::new(20, 1.0).unwrap();
    let phi = 0.3;
    let samples = simulate_nu_e(&b, 4, &imp(), phi, 100_000, 1).unwrap();
    assert_consistent(&samples, &nu_e_distribution(20, 4, &imp(), phi).unwrap());
}

#[test]
fn sampled_parities_at_fifty_runs() {
    let b = ExperimentBudget::new(50, 1.0).unwrap();
    let phi = PI / 16.0;
    let samples = simulate_nu_e(&b, 6, &imp(), phi, 10_000, 2).unwrap();
    assert_consistent(&samples, &nu_e_distribution(50, 6, &imp(), phi).unwrap());
}

#[test]
fn zero_contrast_gives_fair_coin() {
    let b = ExperimentBudget::new(30, 1.0).unwrap();
    let flat = ImperfectionModel::new(0.0, 0.9, 0.9).unwrap();
    let samples = simulate_nu_e(&b, 4, &flat, 0.7, 20_000, 3).unwrap();
    let fair: Vec<f64> = nu_e_distribution(30, 4, &ImperfectionModel::new(0.0, 1.0, 1.0).unwrap(), 0.0).unwrap();
    assert_consistent(&samples, &fair);
}

#[test]
fn exact_moments_match_monte_carlo() {
    let (n, t, nu) = (20, 3.0, 100);
    let b = ExperimentBudget::new(nu, t).unwrap();
    let exact = dfs_uncertainty(&b, n, &imp(), TargetParam::Omega).unwrap();
    let x0 = PI / (2.0 * n as f64 * t);
    let lasers = LaserFreqs::Pair(0.0, 0.0);
    let samples = simulate_nu_e(&b, n, &imp(), PI / (2.0 * n as f64), 100_000, 4).unwrap();
    let sq: Vec<f64> = samples
        .iter()
        .map(|&ne| {
            let est = dfs_ml_estimate(ne, &b, n, &imp(), &lasers, TargetParam::Omega).unwrap();
            (est / exact.bias_factor.abs() - x0).powi(2)
        })
        .collect();
    let m = sq.len() as f64;
    let mean = sq.iter().sum::<f64>() / m;
    let var = sq.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let se = (var / m).sqrt();
    let target = exact.uncertainty.powi(2);
    assert!((mean - target).abs() < 3.0 * se, "MC {mean} vs exact {target} (SE {se})");
}

#[test]
fn scaled_uncertainty_settles_to_bound() {
    let t = 3.0;
    let mut last = f64::INFINITY;
    for nu in [200, 400, 1000, 2000, 5000, 10_000] {
        let b = ExperimentBudget::new(nu, t).unwrap();
        let r = dfs_uncertainty(&b, 20, &imp(), TargetParam::Omega).unwrap();
        let scaled = r.uncertainty * b.total_time().sqrt();
        assert!(scaled <= last * (1.0 + 1e-9), "ν = {nu}");
        last = scaled;
    }
    let bound = dfs_precision_bound(20, &imp(), 1.0, t, TargetParam::Omega).unwrap();
    assert!((last / bound - 1.0).abs() < 0.05);
}
