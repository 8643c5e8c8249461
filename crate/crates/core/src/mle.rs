//! Maximum-likelihood estimation for the DFS schemes and the product-state
//! baseline, with exact finite-ν uncertainties.
//!
//! Uncertainties follow
//! `Δα = ⟨(α_est/|d⟨α_est⟩/dα| - α)²⟩^{1/2}`, evaluated with `α` measured from
//! its laser reference (`δ`, `Ω - (ω_L1 + ω_L2)/2`, or `ω_1 - ω_L1`) so that
//! the result does not depend on the absolute frequency scale. Moments are
//! exact sums over the distribution of the sufficient statistic; the
//! sampling routines exist only as cross-checks and demos.

use std::f64::consts::PI;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dfs::{baseline_contrast, classical_baseline, dfs_precision_bound, ImperfectionModel, TargetParam};
use crate::error::{Error, Result};
use crate::symstate::LaserFreqs;
use crate::util::{binomial, binomial_pmf};

/// Number of repetitions `ν` and per-run interrogation time `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentBudget {
    nu: u64,
    t: f64,
}

impl ExperimentBudget {
    pub fn new(nu: u64, t: f64) -> Result<Self> {
        if nu == 0 {
            return Err(Error::InvalidParameter("need at least one repetition".into()));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
        }
        Ok(Self { nu, t })
    }

    /// `ν = ⌊T/t⌋`. The flag is set when `T` was not a multiple of `t`.
    pub fn from_total_time(total_time: f64, t: f64) -> Result<(Self, bool)> {
        if !(total_time > 0.0 && total_time.is_finite() && t > 0.0) {
            return Err(Error::InvalidParameter(format!("bad budget T = {total_time}, t = {t}")));
        }
        let ratio = total_time / t;
        let nu = (ratio * (1.0 + 1e-12)).floor();
        let budget = Self::new(nu as u64, t)?;
        Ok((budget, (ratio - nu).abs() > 1e-9 * ratio))
    }

    pub fn nu(&self) -> u64 {
        self.nu
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn total_time(&self) -> f64 {
        self.nu as f64 * self.t
    }
}

/// Summary of an estimator at a fixed true value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    /// Mean estimate, measured from the laser reference.
    pub estimate: f64,
    pub bias_factor: f64,
    pub uncertainty: f64,
}

/// Maximizer of `(1 + c cos θ)^k (1 - c cos θ)^{m-k}` over `θ ∈ [0, π]`,
/// written through `excess = 2k - m` and `scale = m c`.
fn clamped_arccos(excess: f64, scale: f64) -> f64 {
    if excess > scale {
        0.0
    } else if excess < -scale {
        PI
    } else if scale == 0.0 {
        PI / 2.0
    } else {
        (excess / scale).clamp(-1.0, 1.0).acos()
    }
}

fn check_dfs(n_atoms: usize, imp: &ImperfectionModel) -> Result<()> {
    if n_atoms < 2 || n_atoms % 2 != 0 {
        return Err(Error::InvalidAtomNumber(format!(
            "DFS schemes need an even number of atoms ≥ 2, got {n_atoms}"
        )));
    }
    imp.validate()
}

fn dfs_phase_estimate(nu_e: u64, nu: u64, n_atoms: usize, kappa: f64) -> f64 {
    let excess = 2.0 * nu_e as f64 - nu as f64;
    clamped_arccos(excess, nu as f64 * kappa) / n_atoms as f64
}

/// ML estimate of `δ` or `Ω` from the number `ν_e` of runs with an even
/// count of '+' results.
pub fn dfs_ml_estimate(
    nu_e: u64,
    budget: &ExperimentBudget,
    n_atoms: usize,
    imp: &ImperfectionModel,
    lasers: &LaserFreqs,
    target: TargetParam,
) -> Result<f64> {
    check_dfs(n_atoms, imp)?;
    if nu_e > budget.nu {
        return Err(Error::OutOfRange {
            value: nu_e as usize,
            max: budget.nu as usize,
        });
    }
    let phi = dfs_phase_estimate(nu_e, budget.nu, n_atoms, imp.kappa(n_atoms));
    let offset = target.offset(phi, budget.t);
    Ok(match target {
        TargetParam::Delta => offset,
        TargetParam::Omega => offset + lasers.mean(),
    })
}

/// Distribution of `ν_e` over `0..=ν`.
pub fn nu_e_distribution(nu: u64, n_atoms: usize, imp: &ImperfectionModel, phi: f64) -> Result<Vec<f64>> {
    check_dfs(n_atoms, imp)?;
    let p = 0.5 * (1.0 + imp.kappa(n_atoms) * (n_atoms as f64 * phi).cos());
    Ok(binomial_pmf(nu as usize, p))
}

fn bias_and_spread<M, E>(pmf_at: M, estimate: E, x0: f64, h: f64) -> Result<EstimatorResult>
where
    M: Fn(f64) -> Vec<f64>,
    E: Fn(usize) -> f64,
{
    let mean = |x: f64| -> f64 { pmf_at(x).iter().enumerate().map(|(k, p)| p * estimate(k)).sum() };
    let bias = (mean(x0 + h) - mean(x0 - h)) / (2.0 * h);
    if !(bias.abs() >= 1e-12) {
        return Err(Error::DegenerateBias(bias));
    }
    let b = bias.abs();
    let pmf = pmf_at(x0);
    let mut first = 0.0;
    let mut second = 0.0;
    for (k, p) in pmf.iter().enumerate() {
        let e = estimate(k);
        first += p * e;
        second += p * (e / b - x0).powi(2);
    }
    Ok(EstimatorResult {
        estimate: first,
        bias_factor: bias,
        uncertainty: second.sqrt(),
    })
}

/// Exact uncertainty of the DFS estimator at the working point `Nφ = π/2`.
pub fn dfs_uncertainty(
    budget: &ExperimentBudget,
    n_atoms: usize,
    imp: &ImperfectionModel,
    target: TargetParam,
) -> Result<EstimatorResult> {
    dfs_uncertainty_at_phase(budget, n_atoms, imp, target, PI / (2.0 * n_atoms as f64))
}

/// As [`dfs_uncertainty`] at an arbitrary true phase `φ`.
pub fn dfs_uncertainty_at_phase(
    budget: &ExperimentBudget,
    n_atoms: usize,
    imp: &ImperfectionModel,
    target: TargetParam,
    phi: f64,
) -> Result<EstimatorResult> {
    check_dfs(n_atoms, imp)?;
    let (nu, t) = (budget.nu, budget.t);
    let kappa = imp.kappa(n_atoms);
    let n = n_atoms as f64;
    let x0 = target.offset(phi, t);
    // Step in α that moves Nφ by 1e-4.
    let h = 1e-4 / (n * target.c() * t);
    let pmf_at = |x: f64| {
        let p = 0.5 * (1.0 + kappa * (n * target.phase(x, t)).cos());
        binomial_pmf(nu as usize, p)
    };
    let estimate = |k: usize| target.offset(dfs_phase_estimate(k as u64, nu, n_atoms, kappa), t);
    bias_and_spread(pmf_at, estimate, x0, h)
}

fn check_product(n_atoms: usize, eta_h: f64, eta_m: f64, gamma: f64, t: f64) -> Result<()> {
    if n_atoms < 2 || n_atoms % 2 != 0 {
        return Err(Error::InvalidAtomNumber(format!(
            "the baseline splits N atoms into two equal groups, got {n_atoms}"
        )));
    }
    ImperfectionModel::new(1.0, eta_h, eta_m)?;
    if !(gamma >= 0.0 && t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("need γ ≥ 0 and t > 0, got {gamma}, {t}")));
    }
    Ok(())
}

/// ML estimate of `ω_1` from `n` '+' results among the `Nν/2` group-A
/// measurements.
#[allow(clippy::too_many_arguments)]
pub fn product_ml_estimate(
    n_plus: u64,
    n_atoms: usize,
    nu: u64,
    eta_h: f64,
    eta_m: f64,
    gamma: f64,
    t: f64,
    laser_freq: f64,
) -> Result<f64> {
    check_product(n_atoms, eta_h, eta_m, gamma, t)?;
    let trials = n_atoms as u64 * nu / 2;
    if n_plus > trials {
        return Err(Error::OutOfRange {
            value: n_plus as usize,
            max: trials as usize,
        });
    }
    let k = baseline_contrast(eta_h, eta_m, gamma, t);
    let excess = 2.0 * n_plus as f64 - trials as f64;
    Ok(laser_freq + clamped_arccos(excess, trials as f64 * k) / t)
}

/// Exact uncertainties of the product-state estimators at `ε_A t = π/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductUncertainty {
    pub delta_omega1: f64,
    pub delta_omega: f64,
    pub delta_delta: f64,
    pub bias_factor: f64,
}

pub fn product_uncertainty(
    n_atoms: usize,
    nu: u64,
    eta_h: f64,
    eta_m: f64,
    gamma: f64,
    t: f64,
) -> Result<ProductUncertainty> {
    check_product(n_atoms, eta_h, eta_m, gamma, t)?;
    if nu == 0 {
        return Err(Error::InvalidParameter("need at least one repetition".into()));
    }
    let trials = n_atoms * nu as usize / 2;
    let k = baseline_contrast(eta_h, eta_m, gamma, t);
    let x0 = PI / (2.0 * t);
    let pmf_at = |x: f64| binomial_pmf(trials, 0.5 * (1.0 + k * (x * t).cos()));
    let estimate = |n: usize| clamped_arccos(2.0 * n as f64 - trials as f64, trials as f64 * k) / t;
    let r = bias_and_spread(pmf_at, estimate, x0, 1e-4 / t)?;
    let dw1 = r.uncertainty;
    // ω_1 and ω_2 are estimated independently with identical statistics.
    Ok(ProductUncertainty {
        delta_omega1: dw1,
        delta_omega: (2.0 * dw1 * dw1).sqrt() / 2.0,
        delta_delta: (2.0 * dw1 * dw1).sqrt(),
        bias_factor: r.bias_factor,
    })
}

/// Outcome of `ν` simulated DFS runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulatedRuns {
    /// Number of '+' results in each run.
    pub counts: Vec<usize>,
    pub nu_e: u64,
}

/// Draws `ν` runs from the exact outcome distribution.
pub fn simulate_runs(
    budget: &ExperimentBudget,
    n_atoms: usize,
    imp: &ImperfectionModel,
    phi: f64,
    seed: u64,
) -> Result<SimulatedRuns> {
    let dist = count_distribution(n_atoms, imp, phi)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(draw_runs(&dist, budget.nu, &mut rng))
}

fn count_distribution(n_atoms: usize, imp: &ImperfectionModel, phi: f64) -> Result<WeightedIndex<f64>> {
    check_dfs(n_atoms, imp)?;
    let kappa = imp.kappa(n_atoms);
    let c = (n_atoms as f64 * phi).cos();
    let weights: Vec<f64> = (0..=n_atoms)
        .map(|n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            binomial(n_atoms, n) * (1.0 + sign * kappa * c)
        })
        .collect();
    WeightedIndex::new(&weights).map_err(|e| Error::InvalidParameter(format!("outcome weights: {e}")))
}

fn draw_runs(dist: &WeightedIndex<f64>, nu: u64, rng: &mut ChaCha8Rng) -> SimulatedRuns {
    let counts: Vec<usize> = (0..nu).map(|_| dist.sample(rng)).collect();
    let nu_e = counts.iter().filter(|&&n| n % 2 == 0).count() as u64;
    SimulatedRuns { counts, nu_e }
}

/// `ν_e` from `replications` independent experiments; replication `r` is
/// seeded with `seed + r`.
pub fn simulate_nu_e(
    budget: &ExperimentBudget,
    n_atoms: usize,
    imp: &ImperfectionModel,
    phi: f64,
    replications: usize,
    seed: u64,
) -> Result<Vec<u64>> {
    let dist = count_distribution(n_atoms, imp, phi)?;
    Ok((0..replications)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
            draw_runs(&dist, budget.nu, &mut rng).nu_e
        })
        .collect())
}

/// One point of the uncertainty-versus-total-time comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MleCurvePoint {
    pub total_time: f64,
    pub nu_dfs: u64,
    pub nu_product: u64,
    /// True if either `ν` had to be floored.
    pub nu_floored: bool,
    pub delta_dfs: f64,
    pub bound_dfs: f64,
    pub delta_product: f64,
    pub bound_product: f64,
}

/// DFS scheme at interrogation time `t_dfs` against the product baseline at
/// its optimal `t = 1/(2γ)`, for each total time `T`.
pub fn mle_curve(
    n_atoms: usize,
    imp: &ImperfectionModel,
    gamma: f64,
    t_dfs: f64,
    target: TargetParam,
    total_times: &[f64],
) -> Result<Vec<MleCurvePoint>> {
    check_dfs(n_atoms, imp)?;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!("γ must be positive, got {gamma}")));
    }
    let t_product = 1.0 / (2.0 * gamma);
    total_times
        .par_iter()
        .map(|&total| {
            let (dfs_budget, f1) = ExperimentBudget::from_total_time(total, t_dfs)?;
            let (nu_p, f2) = ExperimentBudget::from_total_time(total, t_product)?;
            let dfs = dfs_uncertainty(&dfs_budget, n_atoms, imp, target)?;
            let product = product_uncertainty(n_atoms, nu_p.nu(), imp.eta_h, imp.eta_m, gamma, t_product)?;
            let baseline = classical_baseline(n_atoms, imp.eta_h, imp.eta_m, gamma, total)?;
            let (delta_product, bound_product) = match target {
                TargetParam::Omega => (product.delta_omega, baseline.delta_omega),
                TargetParam::Delta => (product.delta_delta, baseline.delta_delta),
            };
            Ok(MleCurvePoint {
                total_time: total,
                nu_dfs: dfs_budget.nu(),
                nu_product: nu_p.nu(),
                nu_floored: f1 || f2,
                delta_dfs: dfs.uncertainty,
                bound_dfs: dfs_precision_bound(n_atoms, imp, total, t_dfs, target)?,
                delta_product,
                bound_product,
            })
        })
        .collect()
}

/// `T = ν t` for about `points` log-spaced integers `ν` in `1..=nu_max`.
pub fn total_time_grid(t: f64, nu_max: u64, points: usize) -> Result<Vec<f64>> {
    if nu_max == 0 || points < 2 || !(t > 0.0) {
        return Err(Error::InvalidParameter("grid needs ν_max ≥ 1, ≥ 2 points and t > 0".into()));
    }
    let top = (nu_max as f64).ln();
    let mut nus: Vec<u64> = (0..points)
        .map(|i| (top * i as f64 / (points - 1) as f64).exp().round() as u64)
        .collect();
    nus.dedup();
    Ok(nus.into_iter().map(|nu| nu as f64 * t).collect())
}
