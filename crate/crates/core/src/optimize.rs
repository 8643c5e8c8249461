//! Probe-state and interrogation-time optimization for conventional Ramsey
//! interferometry under collective dephasing.
//!
//! Only symmetric states need to be searched: mapping any state onto the
//! symmetric state with the same excitation-sector weights leaves the
//! quantum Fisher information unchanged. Sector phases can be dropped as
//! well, since diagonal phase rotations commute with the dynamics. The
//! search space is therefore the non-negative orthant of the unit sphere in
//! `N + 1` real dimensions, parametrized by `x ↦ |x|/‖x‖` and explored with
//! a restarted Nelder–Mead simplex.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fisher::EIGEN_CUTOFF;
use crate::symstate::{ghz_state, product_state, SymmetricState};

/// Settings for the restarted simplex search and the time scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizationConfig {
    pub n_restarts: usize,
    /// Relative convergence tolerance on `F_Q`.
    pub rel_tol: f64,
    pub max_iter: usize,
    pub grid_points: usize,
    /// Lower end of the time grid in units of `1/(2γN²)`.
    pub t_min_factor: f64,
    /// Upper end of the time grid in units of `1/(2γ)`.
    pub t_max_factor: f64,
    /// Relative width at which golden-section refinement of `t` stops.
    pub t_rel_width: f64,
    pub seed: u64,
}

impl Default for OptimizationConfig {
    fn default() -> Self {
        Self {
            n_restarts: 32,
            rel_tol: 1e-8,
            max_iter: 5000,
            grid_points: 60,
            t_min_factor: 1e-2,
            t_max_factor: 10.0,
            t_rel_width: 1e-6,
            seed: 0,
        }
    }
}

impl OptimizationConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(format!("optimizer config: {m}")));
        if self.n_restarts == 0 || self.max_iter == 0 || self.grid_points < 2 {
            return bad("restarts, iterations and grid points must be positive (grid ≥ 2)");
        }
        if !(self.rel_tol > 0.0 && self.t_rel_width > 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.t_min_factor > 0.0 && self.t_max_factor > 0.0) {
            return bad("time grid factors must be positive");
        }
        Ok(())
    }

    fn time_grid(&self, n_atoms: usize, gamma: f64) -> Result<Vec<f64>> {
        let lo = self.t_min_factor / (2.0 * gamma * (n_atoms * n_atoms) as f64);
        let hi = self.t_max_factor / (2.0 * gamma);
        if !(lo < hi) {
            return Err(Error::InvalidParameter(format!("time grid bounds not ordered: {lo} ≥ {hi}")));
        }
        let (llo, lhi) = (lo.ln(), hi.ln());
        let m = self.grid_points;
        Ok((0..m)
            .map(|i| (llo + (lhi - llo) * i as f64 / (m - 1) as f64).exp())
            .collect())
    }
}

/// Quantum Fisher information of a real, non-negative symmetric probe after
/// evolution for time `t` at dephasing rate `γ`, with generator `n_0 - N/2`.
///
/// Real-arithmetic specialization of [`crate::fisher::qfi_mixed`] for
/// `ρ_kl = a_k a_l e^{-γt(k-l)²}` (detuning phases do not affect `F_Q`).
pub fn symmetric_real_qfi(amplitudes: &[f64], gamma: f64, t: f64) -> f64 {
    let d = amplitudes.len();
    let rho = DMatrix::<f64>::from_fn(d, d, |k, l| {
        let x = k as f64 - l as f64;
        amplitudes[k] * amplitudes[l] * (-gamma * t * x * x).exp()
    });
    let deriv = DMatrix::<f64>::from_fn(d, d, |k, l| (k as f64 - l as f64) * rho[(k, l)]);
    let trace = rho.trace();
    let eig = SymmetricEigen::new(rho);
    let projected = eig.eigenvectors.transpose() * deriv * &eig.eigenvectors;
    let cut = EIGEN_CUTOFF * trace;
    let mut f = 0.0;
    for j in 0..d {
        for k in 0..d {
            let s = eig.eigenvalues[j] + eig.eigenvalues[k];
            if s > cut {
                f += projected[(j, k)].powi(2) / s;
            }
        }
    }
    2.0 * t * t * f
}

fn to_unit(x: &[f64]) -> Option<Vec<f64>> {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(n > 0.0) || !n.is_finite() {
        return None;
    }
    Some(x.iter().map(|v| v.abs() / n).collect())
}

#[derive(Clone, Debug)]
struct SimplexResult {
    x: Vec<f64>,
    value: f64,
    converged: bool,
}

/// Nelder–Mead minimization, restarted from the best vertex until a fresh
/// simplex no longer improves the value by more than the tolerance.
fn nelder_mead<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], rel_tol: f64, max_iter: usize) -> SimplexResult {
    let mut start = x0.to_vec();
    let mut iters_left = max_iter;
    let mut best_value = f64::INFINITY;
    loop {
        let (x, value, converged, iters) = nelder_mead_once(&f, &start, rel_tol, iters_left);
        iters_left = iters_left.saturating_sub(iters);
        let improved = best_value - value > rel_tol * value.abs().max(1e-300);
        if value < best_value {
            best_value = value;
            start = x;
        }
        if !converged || iters_left == 0 {
            return SimplexResult {
                x: start,
                value: best_value,
                converged: false,
            };
        }
        if !improved {
            return SimplexResult {
                x: start,
                value: best_value,
                converged: true,
            };
        }
    }
}

fn nelder_mead_once<F: Fn(&[f64]) -> f64>(
    f: &F,
    x0: &[f64],
    rel_tol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64, bool, usize) {
    let d = x0.len();
    let scale = x0.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-3);
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
    simplex.push(x0.to_vec());
    for i in 0..d {
        let mut v = x0.to_vec();
        v[i] += 0.25 * scale;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    for iter in 0..max_iter {
        let mut order: Vec<usize> = (0..=d).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let (fbest, fworst) = (values[0], values[d]);
        // Value spread only: the objective is scale invariant, so the simplex
        // need not shrink along the radial direction.
        if (fworst - fbest).abs() <= rel_tol * fbest.abs().max(1e-300) {
            return (simplex[0].clone(), fbest, true, iter);
        }

        let centroid: Vec<f64> = (0..d)
            .map(|j| simplex[..d].iter().map(|v| v[j]).sum::<f64>() / d as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[d])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let xr = along(alpha);
        let fr = f(&xr);
        if fr < values[0] {
            let xe = along(gamma);
            let fe = f(&xe);
            if fe < fr {
                simplex[d] = xe;
                values[d] = fe;
            } else {
                simplex[d] = xr;
                values[d] = fr;
            }
        } else if fr < values[d - 1] {
            simplex[d] = xr;
            values[d] = fr;
        } else {
            let (xc, fc) = if fr < values[d] {
                let xc = along(rho);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = along(-rho);
                let fc = f(&xc);
                (xc, fc)
            };
            if fc < fr.min(values[d]) {
                simplex[d] = xc;
                values[d] = fc;
            } else {
                let best = simplex[0].clone();
                for i in 1..=d {
                    simplex[i] = best
                        .iter()
                        .zip(&simplex[i])
                        .map(|(b, v)| b + sigma * (v - b))
                        .collect();
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    let i = (0..=d).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    (simplex[i].clone(), values[i], false, max_iter)
}

/// Best probe found at a fixed interrogation time.
#[derive(Clone, Debug, PartialEq)]
pub struct StateOptimum {
    pub state: SymmetricState,
    pub qfi: f64,
    /// False when the winning restart hit the iteration limit; the value is
    /// then the best found, not a converged optimum.
    pub converged: bool,
    pub restart_index: usize,
    /// Best `F_Q` of every restart, in restart order.
    pub restart_values: Vec<f64>,
}

fn check_physical(n_atoms: usize, gamma: f64, t: f64) -> Result<()> {
    if n_atoms == 0 {
        return Err(Error::InvalidAtomNumber("need at least one atom".into()));
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!("γ must be non-negative, got {gamma}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }
    Ok(())
}

fn real_amplitudes(s: &SymmetricState) -> Vec<f64> {
    s.amplitudes().iter().map(|a| a.norm()).collect()
}

/// Maximizes `F_Q` over symmetric probes at time `t`.
///
/// Restart 0 starts from the product state, restart 1 from the GHZ state and
/// the remaining ones from uniformly random points of the orthant, seeded
/// with `seed + restart`. The winner is the largest `F_Q`, ties going to the
/// lower restart index.
pub fn optimize_state_at_t(n_atoms: usize, gamma: f64, t: f64, config: &OptimizationConfig) -> Result<StateOptimum> {
    optimize_state_with_starts(n_atoms, gamma, t, config, &[])
}

fn optimize_state_with_starts(
    n_atoms: usize,
    gamma: f64,
    t: f64,
    config: &OptimizationConfig,
    warm: &[Vec<f64>],
) -> Result<StateOptimum> {
    check_physical(n_atoms, gamma, t)?;
    config.validate()?;
    let d = n_atoms + 1;
    let mut starts = vec![
        real_amplitudes(&product_state(n_atoms)?),
        real_amplitudes(&ghz_state(n_atoms)?),
    ];
    starts.extend(warm.iter().filter(|w| w.len() == d).cloned());
    for r in starts.len()..config.n_restarts.max(starts.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(r as u64));
        starts.push((0..d).map(|_| rng.random::<f64>()).collect());
    }
    starts.truncate(config.n_restarts.max(2 + warm.len().min(1)));

    let objective = |x: &[f64]| match to_unit(x) {
        Some(u) => -symmetric_real_qfi(&u, gamma, t),
        None => f64::INFINITY,
    };
    let runs: Vec<SimplexResult> = starts
        .par_iter()
        .map(|x0| nelder_mead(objective, x0, config.rel_tol, config.max_iter))
        .collect();

    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.value < runs[best].value {
            best = i;
        }
    }
    let unit = to_unit(&runs[best].x).expect("finite objective implies non-zero point");
    let state = SymmetricState::from_unnormalized(unit.iter().map(|&a| C64::new(a, 0.0)).collect())?;
    Ok(StateOptimum {
        qfi: -runs[best].value,
        state,
        converged: runs[best].converged,
        restart_index: best,
        restart_values: runs.iter().map(|r| -r.value).collect(),
    })
}

/// Minimizes a positive function of `t` over a log-spaced grid followed by
/// golden-section refinement in `ln t` around the best grid point.
fn minimize_over_time<F>(grid: &[f64], rel_width: f64, mut f: F) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut values = Vec::with_capacity(grid.len());
    for &t in grid {
        values.push(f(t)?);
    }
    let mut i = 0;
    for (j, v) in values.iter().enumerate() {
        if *v < values[i] {
            i = j;
        }
    }
    let (mut best_t, mut best_v) = (grid[i], values[i]);
    let mut a = grid[i.saturating_sub(1)].ln();
    let mut b = grid[(i + 1).min(grid.len() - 1)].ln();
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut e = a + inv_phi * (b - a);
    let mut fc = f(c.exp())?;
    let mut fe = f(e.exp())?;
    while b - a > rel_width {
        if fc < fe {
            b = e;
            e = c;
            fe = fc;
            c = b - inv_phi * (b - a);
            fc = f(c.exp())?;
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + inv_phi * (b - a);
            fe = f(e.exp())?;
        }
    }
    for (t, v) in [(c.exp(), fc), (e.exp(), fe)] {
        if v < best_v {
            best_t = t;
            best_v = v;
        }
    }
    Ok((best_t, best_v))
}

/// Jointly optimized probe and interrogation time.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimalPrecision {
    pub t_opt: f64,
    pub state: SymmetricState,
    pub qfi: f64,
    /// `√(t_opt / (T F_Q))`.
    pub bound: f64,
    pub converged: bool,
}

fn check_budget(n_atoms: usize, gamma: f64, total_time: f64) -> Result<()> {
    if n_atoms == 0 {
        return Err(Error::InvalidAtomNumber("need at least one atom".into()));
    }
    if !(gamma > 0.0 && gamma.is_finite() && total_time > 0.0 && total_time.is_finite()) {
        return Err(Error::InvalidParameter("γ and T must be positive and finite".into()));
    }
    Ok(())
}

/// Best precision over symmetric probes and interrogation times for a
/// total time budget `T`.
pub fn optimal_precision(
    n_atoms: usize,
    gamma: f64,
    total_time: f64,
    config: &OptimizationConfig,
) -> Result<OptimalPrecision> {
    check_budget(n_atoms, gamma, total_time)?;
    config.validate()?;
    let grid = config.time_grid(n_atoms, gamma)?;
    let mut warm: Option<Vec<f64>> = None;
    let mut best: Option<(f64, StateOptimum)> = None;
    let mut all_converged = true;
    let mut objective = |t: f64| -> Result<f64> {
        let warm_starts: Vec<Vec<f64>> = warm.iter().cloned().collect();
        let opt = optimize_state_with_starts(n_atoms, gamma, t, config, &warm_starts)?;
        let value = t / opt.qfi;
        warm = Some(real_amplitudes(&opt.state));
        if best.as_ref().is_none_or(|(v, _)| value < *v) {
            all_converged &= opt.converged;
            best = Some((value, opt));
        }
        Ok(value)
    };
    let (t_opt, _) = minimize_over_time(&grid, config.t_rel_width, &mut objective)?;
    let (value, opt) = best.expect("time grid is non-empty");
    let _ = t_opt;
    let t_best = value * opt.qfi;
    Ok(OptimalPrecision {
        t_opt: t_best,
        bound: (value / total_time).sqrt(),
        qfi: opt.qfi,
        state: opt.state,
        converged: all_converged,
    })
}

/// `(t_opt, Δ_opt)` for the product probe.
pub fn product_precision_opt(n_atoms: usize, gamma: f64, total_time: f64) -> Result<(f64, f64)> {
    check_budget(n_atoms, gamma, total_time)?;
    let config = OptimizationConfig::default();
    let grid = config.time_grid(n_atoms, gamma)?;
    let amps = real_amplitudes(&product_state(n_atoms)?);
    let (t_opt, value) = minimize_over_time(&grid, config.t_rel_width, |t| {
        Ok(t / symmetric_real_qfi(&amps, gamma, t))
    })?;
    Ok((t_opt, (value / total_time).sqrt()))
}
