//! Ramsey schemes in a decoherence-free subspace.
//!
//! Two groups A and B of `N/2` atoms each see the same collective field.
//! Estimating `δ = ω_1 - ω_2` uses `|0…0⟩_A|1…1⟩_B + |1…1⟩_A|0…0⟩_B` with
//! equal couplings; estimating `Ω = (ω_1 + ω_2)/2` uses the GHZ state with
//! opposite couplings for the two groups. Either way the noise operator
//! annihilates the probe and the only phase left is `Nφ`, with
//! `φ = δt/2` or `φ = (Ω - (ω_L1 + ω_L2)/2) t`.
//!
//! Imperfections: the prepared state is `ξ|ψ⟩⟨ψ| + (1 - ξ)𝟙/2^N`, each
//! final Hadamard is replaced by `η_H HρH + (1 - η_H)𝟙/2`, and each readout
//! reports the wrong bit with probability `(1 - η_M)/2`.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symstate::{dfs_pattern_state, ghz_full, FullState, Group, SchemeSpec};

/// Preparation, gate and readout quality.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImperfectionModel {
    pub xi: f64,
    pub eta_h: f64,
    pub eta_m: f64,
}

impl ImperfectionModel {
    pub fn new(xi: f64, eta_h: f64, eta_m: f64) -> Result<Self> {
        let m = Self { xi, eta_h, eta_m };
        m.validate()?;
        Ok(m)
    }

    pub fn perfect() -> Self {
        Self {
            xi: 1.0,
            eta_h: 1.0,
            eta_m: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("ξ", self.xi), ("η_H", self.eta_h), ("η_M", self.eta_m)] {
            check_unit(name, v)?;
        }
        Ok(())
    }

    /// Overlap of the prepared state with the ideal probe, `ξ + (1 - ξ)/2^N`.
    pub fn fidelity(&self, n_atoms: usize) -> f64 {
        self.xi + (1.0 - self.xi) * 0.5f64.powi(n_atoms as i32)
    }

    /// Fringe contrast `ξ η_H^N η_M^N`.
    pub fn kappa(&self, n_atoms: usize) -> f64 {
        let n = n_atoms as i32;
        self.xi * self.eta_h.powi(n) * self.eta_m.powi(n)
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidParameter(format!("{name} = {v} not in [0, 1]")));
    }
    Ok(())
}

fn check_even(n_atoms: usize) -> Result<()> {
    if n_atoms < 2 || n_atoms % 2 != 0 {
        return Err(Error::InvalidAtomNumber(format!(
            "DFS schemes need an even number of atoms ≥ 2, got {n_atoms}"
        )));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

/// Which frequency combination is being estimated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetParam {
    Delta,
    Omega,
}

impl TargetParam {
    /// `dφ/dα / t`.
    pub fn c(self) -> f64 {
        match self {
            TargetParam::Delta => 0.5,
            TargetParam::Omega => 1.0,
        }
    }

    /// `φ` for a value `offset` of the parameter measured from its laser
    /// reference (`δ` itself, or `Ω - (ω_L1 + ω_L2)/2`).
    pub fn phase(self, offset: f64, t: f64) -> f64 {
        self.c() * offset * t
    }

    /// Inverse of [`TargetParam::phase`].
    pub fn offset(self, phi: f64, t: f64) -> f64 {
        phi / (self.c() * t)
    }
}

/// Probability `q_n` of one particular outcome sequence with `n` '+' results.
pub fn outcome_probability(n: usize, n_atoms: usize, imp: &ImperfectionModel, phi: f64) -> Result<f64> {
    check_even(n_atoms)?;
    imp.validate()?;
    if n > n_atoms {
        return Err(Error::OutOfRange {
            value: n,
            max: n_atoms,
        });
    }
    Ok(sequence_probability(n, n_atoms, imp.kappa(n_atoms), phi))
}

fn sequence_probability(n: usize, n_atoms: usize, kappa: f64, phi: f64) -> f64 {
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    0.5f64.powi(n_atoms as i32) * (1.0 + sign * kappa * (n_atoms as f64 * phi).cos())
}

/// Per-atom POVM elements in the `{|0⟩, |1⟩}` basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoOutcomePovm {
    pub plus: Matrix2<f64>,
    pub minus: Matrix2<f64>,
}

/// Readout in the computational basis that flips the result with
/// probability `(1 - η_M)/2`. '+' corresponds to finding `|0⟩`.
pub fn faulty_readout(eta_m: f64) -> Result<TwoOutcomePovm> {
    check_unit("η_M", eta_m)?;
    let (a, b) = ((1.0 + eta_m) / 2.0, (1.0 - eta_m) / 2.0);
    Ok(TwoOutcomePovm {
        plus: Matrix2::new(a, 0.0, 0.0, b),
        minus: Matrix2::new(b, 0.0, 0.0, a),
    })
}

/// Heisenberg-picture action of the faulty Hadamard on an effect `E`:
/// `η_H HEH + (1 - η_H) Tr(E) 𝟙/2`.
pub fn faulty_hadamard_dual(eta_h: f64, effect: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    check_unit("η_H", eta_h)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = Matrix2::new(s, s, s, -s);
    Ok(h * effect * h * eta_h + Matrix2::identity() * ((1.0 - eta_h) * effect.trace() / 2.0))
}

/// `Π_± = ((1 ± η_Hη_M)/2)|±⟩⟨±| + ((1 ∓ η_Hη_M)/2)|∓⟩⟨∓| = (𝟙 ± η_Hη_M σ_x)/2`.
pub fn compose_faulty_povm(eta_h: f64, eta_m: f64) -> Result<TwoOutcomePovm> {
    check_unit("η_H", eta_h)?;
    check_unit("η_M", eta_m)?;
    let e = eta_h * eta_m;
    Ok(TwoOutcomePovm {
        plus: Matrix2::new(0.5, e / 2.0, e / 2.0, 0.5),
        minus: Matrix2::new(0.5, -e / 2.0, -e / 2.0, 0.5),
    })
}

/// Classical Fisher information about the target parameter from one run.
pub fn dfs_fisher(n_atoms: usize, imp: &ImperfectionModel, phi: f64, target: TargetParam, t: f64) -> Result<f64> {
    check_even(n_atoms)?;
    imp.validate()?;
    check_positive("t", t)?;
    let k = imp.kappa(n_atoms);
    let nphi = n_atoms as f64 * phi;
    let num = (target.c() * n_atoms as f64 * t * k).powi(2) * nphi.sin().powi(2);
    let den = 1.0 - (k * nphi.cos()).powi(2);
    if den <= 0.0 {
        // Perfect contrast at a fringe extremum: the limit is (cNt)².
        return Ok((target.c() * n_atoms as f64 * t).powi(2));
    }
    Ok(num / den)
}

/// Cramér-Rao bound at the optimal working point `Nφ = π/2`.
pub fn dfs_precision_bound(
    n_atoms: usize,
    imp: &ImperfectionModel,
    total_time: f64,
    t: f64,
    target: TargetParam,
) -> Result<f64> {
    check_even(n_atoms)?;
    imp.validate()?;
    check_positive("t", t)?;
    check_positive("T", total_time)?;
    let k = imp.kappa(n_atoms);
    if k == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (target.c() * (total_time * t).sqrt() * n_atoms as f64 * k))
}

/// Conventional Ramsey with product states, uncorrelated dephasing and
/// `N/2` atoms per frequency, at the optimal `t = 1/(2γ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalBaseline {
    pub t_opt: f64,
    pub delta_omega1: f64,
    pub delta_omega: f64,
    pub delta_delta: f64,
}

pub fn classical_baseline(n_atoms: usize, eta_h: f64, eta_m: f64, gamma: f64, total_time: f64) -> Result<ClassicalBaseline> {
    check_even(n_atoms)?;
    check_unit("η_H", eta_h)?;
    check_unit("η_M", eta_m)?;
    check_positive("γ", gamma)?;
    check_positive("T", total_time)?;
    let c = eta_h * eta_h * eta_m;
    let e = std::f64::consts::E;
    let n = n_atoms as f64;
    let delta_omega = (2.0 * gamma * e / (n * total_time)).sqrt() / c;
    Ok(ClassicalBaseline {
        t_opt: 1.0 / (2.0 * gamma),
        delta_omega1: (4.0 * gamma * e / (n * total_time)).sqrt() / c,
        delta_omega,
        delta_delta: 2.0 * delta_omega,
    })
}

/// Contrast `η_H² η_M e^{-γt}` of a single product-state atom.
pub fn baseline_contrast(eta_h: f64, eta_m: f64, gamma: f64, t: f64) -> f64 {
    eta_h * eta_h * eta_m * (-gamma * t).exp()
}

/// `(P_+, P_-)` for one atom of group A with detuning `ε_A = ω_1 - ω_L1`.
pub fn baseline_probabilities(eta_h: f64, eta_m: f64, gamma: f64, t: f64, eps_a: f64) -> Result<(f64, f64)> {
    check_unit("η_H", eta_h)?;
    check_unit("η_M", eta_m)?;
    let k = baseline_contrast(eta_h, eta_m, gamma, t) * (eps_a * t).cos();
    Ok(((1.0 + k) / 2.0, (1.0 - k) / 2.0))
}

/// Fisher information about `ω_1` from one atom.
pub fn baseline_fisher(eta_h: f64, eta_m: f64, gamma: f64, t: f64, eps_a: f64) -> Result<f64> {
    check_unit("η_H", eta_h)?;
    check_unit("η_M", eta_m)?;
    let k = baseline_contrast(eta_h, eta_m, gamma, t);
    let x = eps_a * t;
    let den = 1.0 - (k * x.cos()).powi(2);
    if den <= 0.0 {
        return Ok(t * t);
    }
    Ok((k * t * x.sin()).powi(2) / den)
}

/// Smallest `ξ(N)` for which the DFS scheme at `γt` beats the optimized
/// conventional scheme.
pub fn fidelity_threshold(n_atoms: usize, eta_h: f64, eta_m: f64, gamma_t: f64) -> Result<f64> {
    check_even(n_atoms)?;
    check_unit("η_H", eta_h)?;
    check_unit("η_M", eta_m)?;
    check_positive("γt", gamma_t)?;
    let n = n_atoms as i32;
    let root = (2.0 * n_atoms as f64 * gamma_t * std::f64::consts::E).sqrt();
    Ok(1.0 / (eta_h.powi(n - 2) * eta_m.powi(n - 1) * root))
}

/// First `N/2` atoms in group A, the rest in B.
pub fn dfs_partition(n_atoms: usize) -> Result<Vec<Group>> {
    check_even(n_atoms)?;
    Ok((0..n_atoms)
        .map(|j| if j < n_atoms / 2 { Group::A } else { Group::B })
        .collect())
}

/// Ideal probe for the given target, matching [`dfs_partition`].
pub fn dfs_input_state(n_atoms: usize, target: TargetParam) -> Result<FullState> {
    check_even(n_atoms)?;
    match target {
        TargetParam::Delta => {
            let pattern: String = (0..n_atoms).map(|j| if j < n_atoms / 2 { '0' } else { '1' }).collect();
            dfs_pattern_state(&pattern)
        }
        TargetParam::Omega => ghz_full(n_atoms),
    }
}

/// Scheme for the given target on [`dfs_partition`]. The δ scheme uses a
/// single laser at `laser1`.
pub fn dfs_scheme(
    n_atoms: usize,
    target: TargetParam,
    omega1: f64,
    omega2: f64,
    laser1: f64,
    laser2: f64,
) -> Result<SchemeSpec> {
    let partition = dfs_partition(n_atoms)?;
    match target {
        TargetParam::Delta => SchemeSpec::dfs_delta(partition, omega1, omega2, laser1),
        TargetParam::Omega => SchemeSpec::dfs_omega(partition, omega1, omega2, laser1, laser2),
    }
}
