use std::f64::consts::PI;

use qfreq::dfs::{
    compose_faulty_povm, dfs_input_state, dfs_scheme, outcome_probability, ImperfectionModel, TargetParam,
    TwoOutcomePovm,
};
use qfreq::dynamics::{evolve_full_density, DensityMatrix, FullDensityMatrix, NoiseParams};

/// Probabilities of every outcome sequence (bit j set = atom j gave '-').
fn sequence_probabilities(rho: &FullDensityMatrix, povm: &TwoOutcomePovm) -> Vec<f64> {
    let n = rho.n_atoms();
    let d = 1usize << n;
    let m = rho.matrix();
    (0..d)
        .map(|seq| {
            let mut p = 0.0;
            for a in 0..d {
                for b in 0..d {
                    let mut w = 1.0;
                    for j in 0..n {
                        let e = if (seq >> j) & 1 == 0 { &povm.plus } else { &povm.minus };
                        w *= e[((b >> j) & 1, (a >> j) & 1)];
                        if w == 0.0 {
                            break;
                        }
                    }
                    p += (m[(a, b)] * w).re;
                }
            }
            p
        })
        .collect()
}

fn check_scheme(n: usize, target: TargetParam, imp: ImperfectionModel, gamma: f64, t: f64) {
    let (w1, w2, l1, l2) = (2.1, 1.3, 1.9, 1.0);
    let scheme = dfs_scheme(n, target, w1, w2, l1, l2).unwrap();
    let phi = match target {
        TargetParam::Delta => target.phase(w1 - w2, t),
        TargetParam::Omega => target.phase((w1 + w2) / 2.0 - (l1 + l2) / 2.0, t),
    };
    let rho0 = FullDensityMatrix::mixed_with_identity(&dfs_input_state(n, target).unwrap(), imp.xi).unwrap();
    let rho = evolve_full_density(&rho0, &scheme, NoiseParams::new(gamma, t).unwrap()).unwrap();
    let povm = compose_faulty_povm(imp.eta_h, imp.eta_m).unwrap();
    let probs = sequence_probabilities(&rho, &povm);
    for (seq, p) in probs.iter().enumerate() {
        let n_plus = n - seq.count_ones() as usize;
        let q = outcome_probability(n_plus, n, &imp, phi).unwrap();
        assert!((p - q).abs() < 1e-12, "N={n} {target:?} seq={seq:b}: {p} vs {q}");
    }
}

#[test]
fn composed_channels_reproduce_outcome_probabilities() {
    let models = [
        ImperfectionModel::new(0.6, 0.98, 0.99).unwrap(),
        ImperfectionModel::new(0.25, 0.7, 0.85).unwrap(),
        ImperfectionModel::perfect(),
    ];
    for n in [2, 4, 6] {
        for imp in models {
            for target in [TargetParam::Delta, TargetParam::Omega] {
                check_scheme(n, target, imp, 2.5, 0.8);
            }
        }
    }
}

#[test]
fn worked_example_through_channels() {
    // N = 4 at Nφ = π/3 for the Ω scheme.
    let imp = ImperfectionModel::new(0.6, 0.98, 0.99).unwrap();
    let n = 4;
    let t = 1.0;
    let l = 0.5;
    let omega = l + PI / 12.0;
    let scheme = dfs_scheme(n, TargetParam::Omega, omega, omega, l, l).unwrap();
    let rho0 = FullDensityMatrix::mixed_with_identity(&dfs_input_state(n, TargetParam::Omega).unwrap(), imp.xi).unwrap();
    let rho = evolve_full_density(&rho0, &scheme, NoiseParams::new(1.0, t).unwrap()).unwrap();
    let probs = sequence_probabilities(&rho, &compose_faulty_povm(imp.eta_h, imp.eta_m).unwrap());
    let expected = (1.0 + 0.6 * 0.98f64.powi(4) * 0.99f64.powi(4) * 0.5) / 16.0;
    assert!((probs[0] - expected).abs() < 1e-14);
}
