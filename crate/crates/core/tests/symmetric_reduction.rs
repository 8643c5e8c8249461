use num_complex::Complex64 as C64;
use proptest::prelude::*;
use qfreq::dynamics::{evolve_full, evolve_symmetric, NoiseParams};
use qfreq::fisher::{qfi_mixed, GeneratorSpec};
use qfreq::optimize::{optimize_state_at_t, symmetric_real_qfi, OptimizationConfig};
use qfreq::symstate::{symmetrize, FullState, SchemeSpec, SymmetricState};

fn full_state(n: usize, parts: &[(f64, f64)]) -> Option<FullState> {
    let amps: Vec<C64> = parts.iter().take(1 << n).map(|&(a, b)| C64::new(a, b)).collect();
    FullState::from_unnormalized(n, amps).ok()
}

fn full_qfi(psi: &FullState, gamma: f64, t: f64, detuning: f64) -> f64 {
    let n = psi.n_atoms();
    let scheme = SchemeSpec::conventional(n, detuning, 0.0).unwrap();
    let rho = evolve_full(psi, &scheme, NoiseParams::new(gamma, t).unwrap()).unwrap();
    qfi_mixed(&rho, &GeneratorSpec::frequency_full(n), t).unwrap()
}

fn sym_qfi(s: &SymmetricState, gamma: f64, t: f64, detuning: f64) -> f64 {
    let rho = evolve_symmetric(s, detuning, NoiseParams::new(gamma, t).unwrap());
    qfi_mixed(&rho, &GeneratorSpec::frequency_symmetric(s.n_atoms()), t).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetrizing_keeps_qfi(
        n in 2usize..6,
        parts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 32),
        gamma in 0.0f64..2.0,
        t in 0.01f64..2.0,
        detuning in -3.0f64..3.0,
    ) {
        let Some(psi) = full_state(n, &parts) else { return Ok(()) };
        let f_full = full_qfi(&psi, gamma, t, detuning);
        let f_sym = sym_qfi(&symmetrize(&psi), gamma, t, detuning);
        prop_assert!((f_full - f_sym).abs() <= 1e-8 * f_full.max(1.0));
    }

    #[test]
    fn sector_phases_do_not_matter(
        n in 1usize..9,
        parts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 9),
        gamma in 0.0f64..2.0,
        t in 0.01f64..2.0,
    ) {
        let amps: Vec<C64> = parts.iter().take(n + 1).map(|&(a, b)| C64::new(a, b)).collect();
        let Ok(s) = SymmetricState::from_unnormalized(amps) else { return Ok(()) };
        let f = sym_qfi(&s, gamma, t, 0.0);
        let stripped = s.strip_phases();
        let real: Vec<f64> = stripped.amplitudes().iter().map(|a| a.re).collect();
        prop_assert!((sym_qfi(&stripped, gamma, t, 0.0) - f).abs() <= 1e-9 * f.max(1.0));
        prop_assert!((symmetric_real_qfi(&real, gamma, t) - f).abs() <= 1e-9 * f.max(1.0));
    }
}

#[test]
fn optimum_bounds_random_full_states() {
    let config = OptimizationConfig {
        n_restarts: 8,
        ..OptimizationConfig::default()
    };
    let (gamma, t) = (1.0, 0.3);
    for n in 2..=4 {
        let opt = optimize_state_at_t(n, gamma, t, &config).unwrap();
        for i in 0..20 {
            let parts: Vec<(f64, f64)> = (0..1 << n)
                .map(|k| (((k * 7 + i * 13) % 11) as f64 - 5.0, ((k * 3 + i) % 5) as f64 - 2.0))
                .collect();
            let psi = full_state(n, &parts).unwrap();
            assert!(full_qfi(&psi, gamma, t, 0.0) <= opt.qfi * (1.0 + 1e-9));
        }
    }
}

#[test]
fn restarts_agree_on_the_optimum() {
    let config = OptimizationConfig::default();
    let opt = optimize_state_at_t(6, 1.0, 0.4, &config).unwrap();
    let close = opt
        .restart_values
        .iter()
        .filter(|&&v| (opt.qfi - v) <= 1e-6 * opt.qfi)
        .count();
    assert!(close >= config.n_restarts / 2, "only {close} restarts reached the optimum");
}

#[test]
fn precision_scales_with_sqrt_gamma() {
    let config = OptimizationConfig {
        n_restarts: 8,
        ..OptimizationConfig::default()
    };
    let mut last = 0.0;
    for gamma in [0.25, 1.0, 4.0] {
        let r = qfreq::optimize::optimal_precision(4, gamma, 1.0, &config).unwrap();
        assert!(r.bound > last);
        let scaled = r.bound / gamma.sqrt();
        let base = qfreq::optimize::optimal_precision(4, 1.0, 1.0, &config).unwrap().bound;
        assert!((scaled - base).abs() < 1e-6 * base);
        last = r.bound;
    }
}

#[test]
fn precision_improves_with_atom_number() {
    let config = OptimizationConfig {
        n_restarts: 8,
        ..OptimizationConfig::default()
    };
    let v: Vec<f64> = (1..=6)
        .map(|n| qfreq::optimize::optimal_precision(n, 1.0, 1.0, &config).unwrap().bound)
        .collect();
    assert!(v.windows(2).all(|w| w[1] < w[0]), "{v:?}");
}
