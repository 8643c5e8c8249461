//! Quantum and classical Fisher information, Cramér-Rao bounds.
//!
//! Generators are diagonal operators `H_0' = dH_0/dα` given by their values
//! on the basis of the representation in use. For frequency estimation with
//! `H_0 = (δ/2) S_z` the generator is `S_z/2`, i.e. `k - N/2` on `|k, N-k⟩`
//! and `(#zeros - #ones)/2` on a bitstring. With this normalization a GHZ
//! state reaches `F_Q = t²N²` without noise.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{DensityMatrix, PSD_TOL};
use crate::error::{Error, Result};
use crate::linalg::{eigh, hermiticity_defect, CMatrix};
use crate::symstate::{sigma_z, FullState, SymmetricState};

/// Relative cutoff on `p_j + p_k` (and on outcome probabilities) below which
/// a term is skipped.
pub const EIGEN_CUTOFF: f64 = 1e-12;

/// Diagonal generator `H_0'` as its values on the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    values: Vec<f64>,
}

impl GeneratorSpec {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("generator values must be finite".into()));
        }
        Ok(Self { values })
    }

    /// `n_0`: value `k` on `|k, N-k⟩`.
    pub fn occupation(n_atoms: usize) -> Self {
        Self {
            values: (0..=n_atoms).map(|k| k as f64).collect(),
        }
    }

    /// `S_z/2 = n_0 - N/2` in the Fock basis.
    pub fn frequency_symmetric(n_atoms: usize) -> Self {
        Self {
            values: (0..=n_atoms).map(|k| k as f64 - 0.5 * n_atoms as f64).collect(),
        }
    }

    /// `S_z/2` over the computational basis.
    pub fn frequency_full(n_atoms: usize) -> Self {
        Self {
            values: (0..1usize << n_atoms)
                .map(|idx| 0.5 * (0..n_atoms).map(|j| sigma_z(idx, j)).sum::<f64>())
                .collect(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.values.len() {
            return Err(Error::DimensionMismatch {
                expected: self.values.len(),
                got: dim,
            });
        }
        Ok(())
    }
}

/// Anything exposing pure-state amplitudes.
pub trait StateVector {
    fn amplitudes(&self) -> &[C64];
}

impl StateVector for SymmetricState {
    fn amplitudes(&self) -> &[C64] {
        SymmetricState::amplitudes(self)
    }
}

impl StateVector for FullState {
    fn amplitudes(&self) -> &[C64] {
        FullState::amplitudes(self)
    }
}

/// `F_Q = 4t²(⟨H'²⟩ - ⟨H'⟩²)` for a pure state.
pub fn qfi_pure<S: StateVector + ?Sized>(state: &S, generator: &GeneratorSpec, t: f64) -> Result<f64> {
    let a = state.amplitudes();
    generator.check_dim(a.len())?;
    let (mut m1, mut m2) = (0.0, 0.0);
    for (amp, h) in a.iter().zip(generator.values()) {
        let w = amp.norm_sqr();
        m1 += w * h;
        m2 += w * h * h;
    }
    Ok((4.0 * t * t * (m2 - m1 * m1)).max(0.0))
}

fn checked_spectrum<D: DensityMatrix + ?Sized>(rho: &D, generator: &GeneratorSpec) -> Result<(f64, crate::linalg::HermitianEigen)> {
    let m = rho.matrix();
    generator.check_dim(m.nrows())?;
    let defect = hermiticity_defect(m);
    if defect > crate::dynamics::DENSITY_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let eig = eigh(m)?;
    if eig.values[0] < -PSD_TOL {
        return Err(Error::NegativeEigenvalue(eig.values[0]));
    }
    Ok((m.trace().re, eig))
}

/// Quantum Fisher information of `ρ(α)` whose parameter enters through
/// `e^{-iH_0 t}` with diagonal generator `H_0'`:
///
/// `F_Q = 2 Σ_{p_j+p_k>cut} |⟨ψ_j|ρ'|ψ_k⟩|² / (p_j + p_k)`, `ρ' = -it[H_0', ρ]`.
///
/// Forming `ρ'` elementwise before projecting onto the eigenbasis keeps full
/// relative accuracy when eigenvalue differences are far below machine
/// precision (e.g. a GHZ coherence of `e^{-100}`). It is algebraically equal
/// to [`qfi_mixed_spectral`].
pub fn qfi_mixed<D: DensityMatrix + ?Sized>(rho: &D, generator: &GeneratorSpec, t: f64) -> Result<f64> {
    let (trace, eig) = checked_spectrum(rho, generator)?;
    let m = rho.matrix();
    let h = generator.values();
    let d = m.nrows();
    let deriv = CMatrix::from_fn(d, d, |a, b| m[(a, b)] * C64::new(0.0, -t * (h[a] - h[b])));
    let projected = eig.vectors.adjoint() * deriv * &eig.vectors;
    let cut = EIGEN_CUTOFF * trace;
    let mut f = 0.0;
    for j in 0..d {
        for k in 0..d {
            let s = eig.values[j] + eig.values[k];
            if s > cut {
                f += projected[(j, k)].norm_sqr() / s;
            }
        }
    }
    Ok(2.0 * f)
}

/// Same quantity written with eigenvalue differences:
/// `F_Q = 2t² Σ (p_j - p_k)²/(p_j + p_k) |⟨ψ_j|H_0'|ψ_k⟩|²`.
///
/// Loses relative accuracy when `|p_j - p_k|` is below rounding; kept as an
/// independent route for cross-checks.
pub fn qfi_mixed_spectral<D: DensityMatrix + ?Sized>(rho: &D, generator: &GeneratorSpec, t: f64) -> Result<f64> {
    let (trace, eig) = checked_spectrum(rho, generator)?;
    let d = rho.dim();
    let hdiag = CMatrix::from_fn(d, d, |a, b| {
        if a == b {
            C64::new(generator.values()[a], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let projected = eig.vectors.adjoint() * hdiag * &eig.vectors;
    let cut = EIGEN_CUTOFF * trace;
    let mut f = 0.0;
    for j in 0..d {
        for k in 0..d {
            let (pj, pk) = (eig.values[j], eig.values[k]);
            if pj + pk > cut {
                f += (pj - pk).powi(2) / (pj + pk) * projected[(j, k)].norm_sqr();
            }
        }
    }
    Ok(2.0 * t * t * f)
}

/// Closed form `t²N² e^{-2γN²t}` for a GHZ probe under collective dephasing.
pub fn ghz_qfi(n_atoms: usize, gamma: f64, t: f64) -> f64 {
    let n2 = (n_atoms * n_atoms) as f64;
    t * t * n2 * (-2.0 * gamma * n2 * t).exp()
}

/// Result of a Cramér-Rao evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Bound {
    Finite(f64),
    /// Zero Fisher information: no finite precision.
    Unbounded,
}

impl Bound {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Bound::Finite(v) => Some(v),
            Bound::Unbounded => None,
        }
    }
}

/// `Δα_min = 1/√((T/t)·F)`.
pub fn cramer_rao(fisher: f64, t: f64, total_time: f64) -> Result<Bound> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("interrogation time must be positive, got {t}")));
    }
    if !(total_time >= t && total_time.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "total time {total_time} must be at least the interrogation time {t}"
        )));
    }
    if !(fisher >= 0.0) {
        return Err(Error::InvalidParameter(format!("Fisher information must be non-negative, got {fisher}")));
    }
    if fisher == 0.0 {
        return Ok(Bound::Unbounded);
    }
    Ok(Bound::Finite(1.0 / (total_time / t * fisher).sqrt()))
}

/// Fisher information, quantum Fisher information and the bound they imply.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionResult {
    pub fisher: Option<f64>,
    pub qfi: Option<f64>,
    /// From `fisher` when present, otherwise from `qfi`.
    pub bound: Bound,
    pub t_used: f64,
    pub nu_used: f64,
}

impl PrecisionResult {
    pub fn new(fisher: Option<f64>, qfi: Option<f64>, t: f64, total_time: f64) -> Result<Self> {
        if let (Some(f), Some(fq)) = (fisher, qfi) {
            if f > fq + 1e-9 {
                return Err(Error::InvalidParameter(format!(
                    "Fisher information {f} exceeds quantum Fisher information {fq}"
                )));
            }
        }
        let source = fisher
            .or(qfi)
            .ok_or_else(|| Error::InvalidParameter("need fisher or qfi".into()))?;
        Ok(Self {
            fisher,
            qfi,
            bound: cramer_rao(source, t, total_time)?,
            t_used: t,
            nu_used: total_time / t,
        })
    }
}

/// `(t_opt, Δ_opt) = (1/(2γN²), √(2eγ/T))` for a GHZ probe.
pub fn ghz_optimal_precision(n_atoms: usize, gamma: f64, total_time: f64) -> Result<(f64, f64)> {
    if n_atoms == 0 {
        return Err(Error::InvalidAtomNumber("need at least one atom".into()));
    }
    if !(gamma > 0.0 && total_time > 0.0) {
        return Err(Error::InvalidParameter("γ and T must be positive".into()));
    }
    let t_opt = 1.0 / (2.0 * gamma * (n_atoms * n_atoms) as f64);
    Ok((t_opt, (2.0 * std::f64::consts::E * gamma / total_time).sqrt()))
}

/// `F = Σ_k (dp_k/dα)² / p_k` over outcomes with non-negligible probability.
pub fn classical_fisher(probabilities: &[f64], derivatives: &[f64]) -> Result<f64> {
    if probabilities.len() != derivatives.len() {
        return Err(Error::DimensionMismatch {
            expected: probabilities.len(),
            got: derivatives.len(),
        });
    }
    if let Some(&p) = probabilities.iter().find(|&&p| p < -1e-14 || p.is_nan()) {
        return Err(Error::NegativeProbability(p));
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!("probabilities sum to {total}, not 1")));
    }
    let cut = EIGEN_CUTOFF * total;
    Ok(probabilities
        .iter()
        .zip(derivatives)
        .filter(|(p, _)| **p > cut)
        .map(|(p, d)| d * d / p)
        .sum())
}

/// Central-difference step used by [`classical_fisher_fd`].
pub fn fd_step(alpha: f64) -> f64 {
    (1e-6f64).max(1e-6 * alpha.abs())
}

/// [`classical_fisher`] with `dp/dα` from central differences of the
/// supplied outcome distribution.
pub fn classical_fisher_fd<F>(distribution: F, alpha: f64) -> Result<f64>
where
    F: Fn(f64) -> Vec<f64>,
{
    let h = fd_step(alpha);
    let p = distribution(alpha);
    let plus = distribution(alpha + h);
    let minus = distribution(alpha - h);
    if plus.len() != p.len() || minus.len() != p.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: plus.len().min(minus.len()),
        });
    }
    let d: Vec<f64> = plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * h)).collect();
    classical_fisher(&p, &d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve_symmetric, NoiseParams, SymDensityMatrix};
    use crate::symstate::{ghz_state, product_state};

    #[test]
    fn pure_qfi_examples() {
        let g = GeneratorSpec::occupation(2);
        assert!((qfi_pure(&ghz_state(2).unwrap(), &g, 1.0).unwrap() - 4.0).abs() < 1e-14);
        for n in 1..12 {
            let t = 0.37;
            let f = qfi_pure(&product_state(n).unwrap(), &GeneratorSpec::frequency_symmetric(n), t).unwrap();
            assert!((f - t * t * n as f64).abs() < 1e-12, "n={n}");
            let f = qfi_pure(&ghz_state(n).unwrap(), &GeneratorSpec::frequency_symmetric(n), t).unwrap();
            assert!((f - t * t * (n * n) as f64).abs() < 1e-12);
        }
        let eigenstate = SymmetricState::from_real(&[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(qfi_pure(&eigenstate, &g, 3.0).unwrap(), 0.0);
        assert!(qfi_pure(&eigenstate, &GeneratorSpec::occupation(3), 1.0).is_err());
    }

    #[test]
    fn mixed_matches_pure_without_noise() {
        for n in 1..8 {
            let g = GeneratorSpec::frequency_symmetric(n);
            for s in [ghz_state(n).unwrap(), product_state(n).unwrap()] {
                let rho = evolve_symmetric(&s, 0.4, NoiseParams::new(0.0, 0.9).unwrap());
                let fm = qfi_mixed(&rho, &g, 0.9).unwrap();
                let fp = qfi_pure(&s, &g, 0.9).unwrap();
                assert!((fm - fp).abs() < 1e-9, "n={n} {fm} {fp}");
            }
        }
    }

    #[test]
    fn ghz_closed_form_far_below_rounding() {
        let (n, gamma, t) = (10, 1.0, 1.0);
        let rho = evolve_symmetric(&ghz_state(n).unwrap(), 0.0, NoiseParams::new(gamma, t).unwrap());
        let f = qfi_mixed(&rho, &GeneratorSpec::frequency_symmetric(n), t).unwrap();
        let expected = ghz_qfi(n, gamma, t);
        assert!(((f - expected) / expected).abs() < 1e-9, "{f} vs {expected}");
    }

    #[test]
    fn spectral_route_agrees_at_moderate_noise() {
        for n in 2..9 {
            let rho = evolve_symmetric(&product_state(n).unwrap(), 0.3, NoiseParams::new(1.0, 0.4).unwrap());
            let g = GeneratorSpec::frequency_symmetric(n);
            let a = qfi_mixed(&rho, &g, 0.4).unwrap();
            let b = qfi_mixed_spectral(&rho, &g, 0.4).unwrap();
            assert!(((a - b) / a).abs() < 1e-8, "n={n} {a} {b}");
        }
    }

    #[test]
    fn mixed_rejects_invalid_input() {
        let mut m = CMatrix::identity(2, 2) * C64::new(0.5, 0.0);
        m[(0, 1)] = C64::new(0.3, 0.0);
        let g = GeneratorSpec::occupation(1);
        struct Raw(CMatrix);
        impl DensityMatrix for Raw {
            fn n_atoms(&self) -> usize {
                self.0.nrows() - 1
            }
            fn matrix(&self) -> &CMatrix {
                &self.0
            }
        }
        assert!(matches!(qfi_mixed(&Raw(m.clone()), &g, 1.0), Err(Error::NotHermitian(_))));
        m[(0, 1)] = C64::new(0.0, 0.0);
        m[(0, 0)] = C64::new(1.2, 0.0);
        m[(1, 1)] = C64::new(-0.2, 0.0);
        assert!(matches!(qfi_mixed(&Raw(m), &g, 1.0), Err(Error::NegativeEigenvalue(_))));
        let ok = SymDensityMatrix::from_pure(&ghz_state(1).unwrap());
        assert!(qfi_mixed(&ok, &GeneratorSpec::occupation(2), 1.0).is_err());
    }

    #[test]
    fn cramer_rao_examples() {
        let (t, total, n) = (0.2, 50.0, 7.0);
        let b = cramer_rao(t * t * n * n, t, total).unwrap().value().unwrap();
        assert!((b - 1.0 / ((total * t).sqrt() * n)).abs() < 1e-15);
        let b = cramer_rao(t * t * n, t, total).unwrap().value().unwrap();
        assert!((b - 1.0 / (total * t * n).sqrt()).abs() < 1e-15);
        let b1 = cramer_rao(3.0, t, total).unwrap().value().unwrap();
        let b4 = cramer_rao(12.0, t, total).unwrap().value().unwrap();
        assert!((b1 / b4 - 2.0).abs() < 1e-14);
        assert_eq!(cramer_rao(0.0, t, total).unwrap(), Bound::Unbounded);
        assert!(cramer_rao(1.0, 1.0, 0.5).is_err());
        assert!(cramer_rao(-1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn precision_result_checks_ordering() {
        let r = PrecisionResult::new(Some(1.0), Some(2.0), 0.5, 10.0).unwrap();
        assert_eq!(r.nu_used, 20.0);
        assert_eq!(r.bound, Bound::Finite(1.0 / 20f64.sqrt()));
        assert!(PrecisionResult::new(Some(2.0), Some(1.0), 0.5, 10.0).is_err());
        let q = PrecisionResult::new(None, Some(4.0), 1.0, 4.0).unwrap();
        assert_eq!(q.bound, Bound::Finite(0.25));
    }

    #[test]
    fn ghz_optimum() {
        for n in 1..30 {
            let (t_opt, d) = ghz_optimal_precision(n, 1.0, 1.0).unwrap();
            assert!((d - (2.0 * std::f64::consts::E).sqrt()).abs() < 1e-12);
            assert!((t_opt - 1.0 / (2.0 * (n * n) as f64)).abs() < 1e-15);
        }
        assert_eq!(ghz_optimal_precision(6, 1.0, 1.0).unwrap().0, 1.0 / 72.0);
        assert!((2.0 * std::f64::consts::E).sqrt() - 2.33164 < 1e-5);
    }

    #[test]
    fn two_outcome_fisher_is_t_squared() {
        let t: f64 = 1.7;
        for &alpha in &[0.1f64, 0.4, 1.0, 2.3] {
            let c = (alpha * t).cos();
            let s = (alpha * t).sin();
            let p = [(1.0 + c) / 2.0, (1.0 - c) / 2.0];
            let d = [-t * s / 2.0, t * s / 2.0];
            let f = classical_fisher(&p, &d).unwrap();
            assert!((f - t * t).abs() < 1e-12, "{f}");
            let f_fd = classical_fisher_fd(|a| vec![(1.0 + (a * t).cos()) / 2.0, (1.0 - (a * t).cos()) / 2.0], alpha).unwrap();
            assert!(((f_fd - f) / f).abs() < 1e-6);
        }
        assert_eq!(classical_fisher(&[0.25, 0.75], &[0.0, 0.0]).unwrap(), 0.0);
        assert!(matches!(classical_fisher(&[-0.5, 1.5], &[0.0, 0.0]), Err(Error::NegativeProbability(_))));
        assert!(classical_fisher(&[0.5, 0.6], &[0.0, 0.0]).is_err());
    }
}
