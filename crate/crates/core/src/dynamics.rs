//! Evolution under collective dephasing.
//!
//! The averaged dynamics
//!
//! ```text
//! dρ/dt = -i[H_0, ρ] + (γ/2)(LρL - ½L²ρ - ½ρL²)
//! ```
//!
//! has a closed-form solution whenever `H_0` and `L` are simultaneously
//! diagonal, which holds for every [`SchemeSpec`]. Each matrix element picks
//! up a phase and a Gaussian-in-`(L_a - L_b)` damping factor, so no matrix
//! exponentials are needed.
//!
//! The same dynamics is obtained by averaging pure-state trajectories of the
//! stochastic Schrödinger equation `|dψ⟩ = -iH_0|ψ⟩dt - i√(γ/2) L|ψ⟩ dW`
//! (Stratonovich). Because `L` is diagonal and time independent, a path only
//! depends on the total Wiener increment `W(t) ~ Normal(0, t)`, which
//! [`langevin_trajectory`] samples exactly. [`euler_maruyama_trajectory`]
//! integrates the equivalent Itô form step by step and is kept as a
//! cross-check.
//!
//! Random numbers: each path owns a `ChaCha8Rng` seeded with
//! `seed + path_index` (wrapping); Gaussian variates come from
//! `rand_distr::StandardNormal` (ziggurat), which is a deterministic
//! function of the generator stream.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, hermiticity_defect, CMatrix};
use crate::symstate::{zeros_in, FullState, SchemeSpec, SymmetricState};
use crate::util::binomial;

/// Hermiticity and trace tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-12;
/// Most negative eigenvalue tolerated before a matrix is rejected as not PSD.
pub const PSD_TOL: f64 = 1e-10;

/// Dephasing rate and evolution time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub gamma: f64,
    pub t: f64,
}

impl NoiseParams {
    pub fn new(gamma: f64, t: f64) -> Result<Self> {
        let p = Self { gamma, t };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dephasing rate must be finite and non-negative, got {}",
                self.gamma
            )));
        }
        if !(self.t.is_finite() && self.t >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "evolution time must be finite and non-negative, got {}",
                self.t
            )));
        }
        Ok(())
    }
}

/// Common read-only interface of the two density-matrix representations.
pub trait DensityMatrix {
    fn n_atoms(&self) -> usize;
    fn matrix(&self) -> &CMatrix;

    fn dim(&self) -> usize {
        self.matrix().nrows()
    }

    fn trace(&self) -> C64 {
        self.matrix().trace()
    }

    /// `Tr ρ²`.
    fn purity(&self) -> f64 {
        let m = self.matrix();
        // Tr(ρ²) = Σ_ij ρ_ij ρ_ji = Σ_ij |ρ_ij|² for Hermitian ρ.
        m.iter().map(|z| z.norm_sqr()).sum()
    }

    fn min_eigenvalue(&self) -> f64 {
        eigh(self.matrix())
            .map(|e| e.values[0])
            .unwrap_or(f64::NAN)
    }
}

fn validate_density(m: &CMatrix) -> Result<()> {
    let defect = hermiticity_defect(m);
    if defect > DENSITY_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let tr = m.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > DENSITY_TOL {
        return Err(Error::InvalidParameter(format!("trace {tr} differs from 1")));
    }
    let min = eigh(m)?.values[0];
    if min < -PSD_TOL {
        return Err(Error::NegativeEigenvalue(min));
    }
    Ok(())
}

fn outer(amplitudes: &[C64]) -> CMatrix {
    let n = amplitudes.len();
    CMatrix::from_fn(n, n, |i, j| amplitudes[i] * amplitudes[j].conj())
}

/// Density matrix over the Fock basis `|k, N-k⟩`, `k = 0..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymDensityMatrix {
    n_atoms: usize,
    entries: CMatrix,
}

impl SymDensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn from_matrix(entries: CMatrix) -> Result<Self> {
        if entries.nrows() < 2 || entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                got: entries.ncols(),
            });
        }
        validate_density(&entries)?;
        Ok(Self {
            n_atoms: entries.nrows() - 1,
            entries,
        })
    }

    pub fn from_pure(state: &SymmetricState) -> Self {
        Self {
            n_atoms: state.n_atoms(),
            entries: outer(state.amplitudes()),
        }
    }
}

impl DensityMatrix for SymDensityMatrix {
    fn n_atoms(&self) -> usize {
        self.n_atoms
    }
    fn matrix(&self) -> &CMatrix {
        &self.entries
    }
}

/// Density matrix over the `2^N` computational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FullDensityMatrix {
    n_atoms: usize,
    entries: CMatrix,
}

impl FullDensityMatrix {
    pub fn from_matrix(n_atoms: usize, entries: CMatrix) -> Result<Self> {
        if entries.nrows() != 1 << n_atoms || entries.ncols() != 1 << n_atoms {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_atoms,
                got: entries.nrows(),
            });
        }
        validate_density(&entries)?;
        Ok(Self { n_atoms, entries })
    }

    pub fn from_pure(state: &FullState) -> Self {
        Self {
            n_atoms: state.n_atoms(),
            entries: outer(state.amplitudes()),
        }
    }

    /// `ξ|ψ⟩⟨ψ| + (1 - ξ) 𝟙/2^N`.
    pub fn mixed_with_identity(state: &FullState, xi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&xi) {
            return Err(Error::InvalidParameter(format!("mixing weight {xi} not in [0, 1]")));
        }
        let d = state.dim();
        let mut m = outer(state.amplitudes()) * C64::new(xi, 0.0);
        for i in 0..d {
            m[(i, i)] += C64::new((1.0 - xi) / d as f64, 0.0);
        }
        Ok(Self {
            n_atoms: state.n_atoms(),
            entries: m,
        })
    }

    /// `P ρ P` written in the Fock basis, with `P` the projector onto the
    /// symmetric subspace. Equals `ρ` itself when `ρ` is supported there.
    pub fn project_symmetric(&self) -> SymDensityMatrix {
        let n = self.n_atoms;
        let d = 1usize << n;
        let mut sums = CMatrix::zeros(n + 1, n + 1);
        for a in 0..d {
            let k = zeros_in(a, n);
            for b in 0..d {
                sums[(k, zeros_in(b, n))] += self.entries[(a, b)];
            }
        }
        let w: Vec<f64> = (0..=n).map(|k| 1.0 / binomial(n, k).sqrt()).collect();
        SymDensityMatrix {
            n_atoms: n,
            entries: CMatrix::from_fn(n + 1, n + 1, |k, l| sums[(k, l)] * (w[k] * w[l])),
        }
    }
}

impl DensityMatrix for FullDensityMatrix {
    fn n_atoms(&self) -> usize {
        self.n_atoms
    }
    fn matrix(&self) -> &CMatrix {
        &self.entries
    }
}

/// `ρ_kl(t) = α_k α_l* exp(-γt(k-l)²) exp(-iδt(k-l))`.
pub fn evolve_symmetric(state: &SymmetricState, delta: f64, noise: NoiseParams) -> SymDensityMatrix {
    let a = state.amplitudes();
    let n = a.len();
    let entries = CMatrix::from_fn(n, n, |k, l| {
        let d = k as f64 - l as f64;
        let damp = (-noise.gamma * noise.t * d * d).exp();
        a[k] * a[l].conj() * C64::from_polar(damp, -delta * noise.t * d)
    });
    SymDensityMatrix {
        n_atoms: state.n_atoms(),
        entries,
    }
}

fn check_scheme(scheme: &SchemeSpec, n_atoms: usize) -> Result<()> {
    if scheme.n_atoms() != n_atoms {
        return Err(Error::DimensionMismatch {
            expected: scheme.n_atoms(),
            got: n_atoms,
        });
    }
    Ok(())
}

/// Exact evolution of a pure input over the full basis.
pub fn evolve_full(state: &FullState, scheme: &SchemeSpec, noise: NoiseParams) -> Result<FullDensityMatrix> {
    evolve_full_density(&FullDensityMatrix::from_pure(state), scheme, noise)
}

/// Exact evolution of an arbitrary density matrix:
/// `ρ_ab(t) = ρ_ab(0) exp(-i(E_a - E_b)t) exp(-(γ/4)(L_a - L_b)² t)`.
pub fn evolve_full_density(
    rho: &FullDensityMatrix,
    scheme: &SchemeSpec,
    noise: NoiseParams,
) -> Result<FullDensityMatrix> {
    noise.validate()?;
    check_scheme(scheme, rho.n_atoms)?;
    let e = scheme.energies();
    let l = scheme.noise_values();
    let d = rho.dim();
    let entries = CMatrix::from_fn(d, d, |a, b| {
        let dl = l[a] - l[b];
        let damp = (-0.25 * noise.gamma * dl * dl * noise.t).exp();
        rho.entries[(a, b)] * C64::from_polar(damp, -(e[a] - e[b]) * noise.t)
    });
    Ok(FullDensityMatrix {
        n_atoms: rho.n_atoms,
        entries,
    })
}

/// Pure-state path for a given total Wiener increment `W`:
/// `e^{-iH_0 t} e^{-i√(γ/2) L W} |ψ(0)⟩`.
pub fn langevin_path(state: &FullState, scheme: &SchemeSpec, noise: NoiseParams, wiener: f64) -> Result<FullState> {
    noise.validate()?;
    check_scheme(scheme, state.n_atoms())?;
    let coupling = (noise.gamma / 2.0).sqrt();
    let e = scheme.energies();
    let l = scheme.noise_values();
    let amplitudes = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(a, psi)| psi * C64::from_polar(1.0, -(e[a] * noise.t + coupling * l[a] * wiener)))
        .collect();
    Ok(FullState::from_parts(state.n_atoms(), amplitudes))
}

fn path_rng(seed: u64, path: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(path as u64))
}

/// One exactly sampled realization, `W ~ Normal(0, t)`.
pub fn langevin_trajectory(state: &FullState, scheme: &SchemeSpec, noise: NoiseParams, seed: u64) -> Result<FullState> {
    let mut rng = path_rng(seed, 0);
    let z: f64 = StandardNormal.sample(&mut rng);
    langevin_path(state, scheme, noise, z * noise.t.sqrt())
}

/// `n_paths` realizations; path `i` uses seed `seed + i`.
pub fn langevin_ensemble(
    state: &FullState,
    scheme: &SchemeSpec,
    noise: NoiseParams,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<FullState>> {
    (0..n_paths)
        .into_par_iter()
        .map(|i| langevin_trajectory(state, scheme, noise, seed.wrapping_add(i as u64)))
        .collect()
}

/// Euler–Maruyama integration of the Itô equation
/// `|dψ⟩ = (-iH_0 - (γ/4)L²)|ψ⟩dt - i√(γ/2) L|ψ⟩ dW` driven by the given
/// Wiener increments (one per step, each of variance `t / steps`). The state
/// is renormalized after every step.
pub fn euler_maruyama_path(
    state: &FullState,
    scheme: &SchemeSpec,
    noise: NoiseParams,
    increments: &[f64],
) -> Result<FullState> {
    noise.validate()?;
    check_scheme(scheme, state.n_atoms())?;
    if increments.is_empty() {
        return Err(Error::InvalidParameter("need at least one time step".into()));
    }
    let dt = noise.t / increments.len() as f64;
    let coupling = (noise.gamma / 2.0).sqrt();
    let e = scheme.energies();
    let l = scheme.noise_values();
    let mut psi = state.amplitudes().to_vec();
    for &dw in increments {
        for (a, amp) in psi.iter_mut().enumerate() {
            let factor = C64::new(
                1.0 - 0.25 * noise.gamma * l[a] * l[a] * dt,
                -(e[a] * dt + coupling * l[a] * dw),
            );
            *amp *= factor;
        }
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        psi.iter_mut().for_each(|z| *z /= norm);
    }
    Ok(FullState::from_parts(state.n_atoms(), psi))
}

/// One Euler–Maruyama realization with `n_steps` Gaussian increments drawn
/// from the seeded stream.
pub fn euler_maruyama_trajectory(
    state: &FullState,
    scheme: &SchemeSpec,
    noise: NoiseParams,
    n_steps: usize,
    seed: u64,
) -> Result<FullState> {
    if n_steps == 0 {
        return Err(Error::InvalidParameter("step count must be at least 1".into()));
    }
    let mut rng = path_rng(seed, 0);
    let sd = (noise.t / n_steps as f64).sqrt();
    let increments: Vec<f64> = (0..n_steps)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            sd * z
        })
        .collect();
    euler_maruyama_path(state, scheme, noise, &increments)
}

pub fn euler_maruyama_ensemble(
    state: &FullState,
    scheme: &SchemeSpec,
    noise: NoiseParams,
    n_steps: usize,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<FullState>> {
    (0..n_paths)
        .into_par_iter()
        .map(|i| euler_maruyama_trajectory(state, scheme, noise, n_steps, seed.wrapping_add(i as u64)))
        .collect()
}

/// `(1/M) Σ_m |ψ_m⟩⟨ψ_m|`.
pub fn trajectory_average(trajectories: &[FullState]) -> Result<FullDensityMatrix> {
    let first = trajectories.first().ok_or(Error::EmptyEnsemble)?;
    let n = first.n_atoms();
    let d = first.dim();
    if let Some(bad) = trajectories.iter().find(|s| s.n_atoms() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bad.n_atoms(),
        });
    }
    let mut acc = DMatrix::<C64>::zeros(d, d);
    for s in trajectories {
        let a = s.amplitudes();
        for i in 0..d {
            for j in 0..d {
                acc[(i, j)] += a[i] * a[j].conj();
            }
        }
    }
    acc /= C64::new(trajectories.len() as f64, 0.0);
    Ok(FullDensityMatrix { n_atoms: n, entries: acc })
}

/// Sample mean of `ψ_a ψ_b*` over an ensemble with its standard error
/// (`√((Var Re + Var Im) / M)`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherenceEstimate {
    pub mean_re: f64,
    pub mean_im: f64,
    pub std_error: f64,
    pub n_paths: usize,
}

impl CoherenceEstimate {
    pub fn mean(&self) -> C64 {
        C64::new(self.mean_re, self.mean_im)
    }

    pub fn magnitude(&self) -> f64 {
        self.mean().norm()
    }
}

pub fn coherence_estimate(trajectories: &[FullState], a: usize, b: usize) -> Result<CoherenceEstimate> {
    let first = trajectories.first().ok_or(Error::EmptyEnsemble)?;
    let d = first.dim();
    if a >= d || b >= d {
        return Err(Error::OutOfRange {
            value: a.max(b),
            max: d - 1,
        });
    }
    let samples: Vec<C64> = trajectories
        .iter()
        .map(|s| s.amplitudes()[a] * s.amplitudes()[b].conj())
        .collect();
    CoherenceEstimate::from_samples(&samples)
}

impl CoherenceEstimate {
    /// Mean and standard error of per-path values `ψ_a ψ_b*`.
    pub fn from_samples(samples: &[C64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        let m = samples.len() as f64;
        let mean = samples.iter().sum::<C64>() / m;
        let var = if samples.len() > 1 {
            samples.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / (m - 1.0)
        } else {
            0.0
        };
        Ok(Self {
            mean_re: mean.re,
            mean_im: mean.im,
            std_error: (var / m).sqrt(),
            n_paths: samples.len(),
        })
    }
}
