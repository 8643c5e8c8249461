use qfreq::dynamics::{
    coherence_estimate, euler_maruyama_ensemble, evolve_full, langevin_ensemble, trajectory_average, DensityMatrix,
    NoiseParams,
};
use qfreq::symstate::{dfs_pattern_state, ghz_full, FullState, SchemeSpec};

fn max_entry_gap(a: &impl DensityMatrix, b: &impl DensityMatrix) -> f64 {
    (a.matrix() - b.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn exact_sampling_reproduces_ghz_decay() {
    let n = 3;
    let noise = NoiseParams::new(1.0, 0.3).unwrap();
    let scheme = SchemeSpec::conventional(n, 0.0, 0.0).unwrap();
    let paths = langevin_ensemble(&ghz_full(n).unwrap(), &scheme, noise, 100_000, 7).unwrap();
    let est = coherence_estimate(&paths, 0, 7).unwrap();
    let exact = 0.5 * (-2.7f64).exp();
    assert!((est.magnitude() - exact).abs() < 3.0 * est.std_error);
}

#[test]
fn averaged_paths_match_exact_density_with_detuning() {
    let n = 3;
    let psi = FullState::from_unnormalized(
        n,
        (0..8).map(|k| num_complex::Complex64::new(1.0 + k as f64, 0.5 * k as f64)).collect(),
    )
    .unwrap();
    let scheme = SchemeSpec::conventional(n, 1.3, 0.2).unwrap();
    let noise = NoiseParams::new(0.7, 0.5).unwrap();
    let exact = evolve_full(&psi, &scheme, noise).unwrap();
    let avg = trajectory_average(&langevin_ensemble(&psi, &scheme, noise, 40_000, 1).unwrap()).unwrap();
    assert!(max_entry_gap(&exact, &avg) < 0.01);
}

#[test]
fn euler_maruyama_converges_to_exact_average() {
    let n = 2;
    let noise = NoiseParams::new(1.0, 0.5).unwrap();
    let scheme = SchemeSpec::conventional(n, 0.0, 0.0).unwrap();
    let psi = ghz_full(n).unwrap();
    let paths = euler_maruyama_ensemble(&psi, &scheme, noise, 400, 20_000, 3).unwrap();
    let est = coherence_estimate(&paths, 0, 3).unwrap();
    let exact = 0.5 * (-2.0f64).exp();
    // Statistical error plus the O(dt) weak error of the scheme.
    assert!((est.magnitude() - exact).abs() < 3.0 * est.std_error + 0.005);
}

#[test]
fn dfs_probe_is_unaffected_by_noise_on_every_path() {
    let pattern = "0110";
    let psi = dfs_pattern_state(pattern).unwrap();
    let part = SchemeSpec::partition_from_pattern(pattern).unwrap();
    let scheme = SchemeSpec::dfs_delta(part, 1.0, 0.4, 0.0).unwrap();
    let noise = NoiseParams::new(3.0, 2.0).unwrap();
    let paths = langevin_ensemble(&psi, &scheme, noise, 200, 5).unwrap();
    let first = paths[0].amplitudes().to_vec();
    for p in &paths {
        for (a, b) in p.amplitudes().iter().zip(&first) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
