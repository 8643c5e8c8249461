//! Probe states and scheme descriptions.
//!
//! Two representations are used throughout the crate:
//!
//! - [`SymmetricState`]: amplitudes `α_k` over the permutation-symmetric
//!   Fock states `|k, N-k⟩` (`k` atoms in `|0⟩`), dimension `N + 1`.
//! - [`FullState`]: amplitudes over the `2^N` computational basis. Bit `j`
//!   of a basis index holds the state of atom `j`; bit value `0` is `|0⟩`.
//!   Only used at oracle scale (`N ≤ 12`).
//!
//! `σ_z|0⟩ = +|0⟩` and `σ_z|1⟩ = -|1⟩`, so the collective `S_z` has eigenvalue
//! `2k - N` on `|k, N-k⟩`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::binomial;

/// Largest atom number accepted by the full `2^N` representation.
pub const MAX_FULL_ATOMS: usize = 12;

/// Tolerance on `Σ|α|² = 1` for every constructed state.
pub const NORM_TOL: f64 = 1e-12;

fn norm_sqr(amplitudes: &[C64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum()
}

fn check_normalized(amplitudes: &[C64]) -> Result<()> {
    let n2 = norm_sqr(amplitudes);
    if (n2 - 1.0).abs() > NORM_TOL || !n2.is_finite() {
        return Err(Error::NotNormalized(n2));
    }
    Ok(())
}

fn normalized(mut amplitudes: Vec<C64>) -> Result<Vec<C64>> {
    let n2 = norm_sqr(&amplitudes);
    if !(n2 > 0.0) || !n2.is_finite() {
        return Err(Error::NotNormalized(n2));
    }
    let s = 1.0 / n2.sqrt();
    amplitudes.iter_mut().for_each(|a| *a *= s);
    Ok(amplitudes)
}

/// Pure state in the symmetric subspace of `N` atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricState {
    n_atoms: usize,
    amplitudes: Vec<C64>,
}

impl SymmetricState {
    /// Wraps already-normalized amplitudes `(α_0, …, α_N)`.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidAtomNumber(format!(
                "symmetric state needs at least 2 amplitudes, got {}",
                amplitudes.len()
            )));
        }
        check_normalized(&amplitudes)?;
        Ok(Self {
            n_atoms: amplitudes.len() - 1,
            amplitudes,
        })
    }

    /// Normalizes the given amplitudes first. Rejects the zero vector.
    pub fn from_unnormalized(amplitudes: Vec<C64>) -> Result<Self> {
        Self::new(normalized(amplitudes)?)
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::from_unnormalized(amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// `α_k → |α_k|`.
    pub fn strip_phases(&self) -> Self {
        Self {
            n_atoms: self.n_atoms,
            amplitudes: self
                .amplitudes
                .iter()
                .map(|a| C64::new(a.norm(), 0.0))
                .collect(),
        }
    }

    /// The same state written in the computational basis, each Fock state
    /// expanded as the normalized sum over its `C(N, k)` bitstrings.
    pub fn embed(&self) -> Result<FullState> {
        let n = self.n_atoms;
        check_full_size(n)?;
        let weights: Vec<f64> = (0..=n).map(|k| 1.0 / binomial(n, k).sqrt()).collect();
        let amplitudes = (0..1usize << n)
            .map(|idx| {
                let k = zeros_in(idx, n);
                self.amplitudes[k] * weights[k]
            })
            .collect();
        Ok(FullState {
            n_atoms: n,
            amplitudes,
        })
    }
}

/// `(|N,0⟩ + |0,N⟩)/√2`.
pub fn ghz_state(n: usize) -> Result<SymmetricState> {
    check_atoms(n)?;
    let mut amplitudes = vec![C64::new(0.0, 0.0); n + 1];
    amplitudes[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amplitudes[n] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    SymmetricState::new(amplitudes)
}

/// `[(|0⟩+|1⟩)/√2]^{⊗N}`, i.e. `α_k = 2^{-N/2} √C(N,k)`.
pub fn product_state(n: usize) -> Result<SymmetricState> {
    check_atoms(n)?;
    let scale = 0.5f64.powf(n as f64 / 2.0);
    let amplitudes: Vec<C64> = (0..=n)
        .map(|k| C64::new(scale * binomial(n, k).sqrt(), 0.0))
        .collect();
    // Rounding in the scale factor can leave |Σ - 1| ~ 1e-15; renormalize.
    SymmetricState::from_unnormalized(amplitudes)
}

fn check_atoms(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidAtomNumber("need at least one atom".into()));
    }
    Ok(())
}

fn check_full_size(n: usize) -> Result<()> {
    check_atoms(n)?;
    if n > MAX_FULL_ATOMS {
        return Err(Error::InvalidAtomNumber(format!(
            "full representation limited to {MAX_FULL_ATOMS} atoms, got {n}"
        )));
    }
    Ok(())
}

/// Number of atoms in `|0⟩` for basis index `idx`.
#[inline]
pub fn zeros_in(idx: usize, n_atoms: usize) -> usize {
    n_atoms - (idx.count_ones() as usize)
}

/// `+1` if atom `j` is in `|0⟩` for basis index `idx`, else `-1`.
#[inline]
pub fn sigma_z(idx: usize, j: usize) -> f64 {
    if (idx >> j) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Pure state over the full computational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FullState {
    n_atoms: usize,
    amplitudes: Vec<C64>,
}

impl FullState {
    pub fn new(n_atoms: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_full_size(n_atoms)?;
        if amplitudes.len() != 1 << n_atoms {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_atoms,
                got: amplitudes.len(),
            });
        }
        check_normalized(&amplitudes)?;
        Ok(Self {
            n_atoms,
            amplitudes,
        })
    }

    pub fn from_unnormalized(n_atoms: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_full_size(n_atoms)?;
        if amplitudes.len() != 1 << n_atoms {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_atoms,
                got: amplitudes.len(),
            });
        }
        Self::new(n_atoms, normalized(amplitudes)?)
    }

    /// Computational basis state given as a bit pattern (`'0'`/`'1'` per
    /// atom, atom 0 first).
    pub fn basis(pattern: &str) -> Result<Self> {
        let (n, idx) = parse_pattern(pattern)?;
        check_full_size(n)?;
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n];
        amplitudes[idx] = C64::new(1.0, 0.0);
        Self::new(n, amplitudes)
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// Unchecked constructor for evolution routines that preserve the norm.
    pub(crate) fn from_parts(n_atoms: usize, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_atoms);
        Self {
            n_atoms,
            amplitudes,
        }
    }
}

/// Parses a `'0'`/`'1'` string into `(N, basis index)`; character `j` sets
/// bit `j`.
pub fn parse_pattern(pattern: &str) -> Result<(usize, usize)> {
    let n = pattern.chars().count();
    if n == 0 {
        return Err(Error::InvalidParameter("empty bit pattern".into()));
    }
    if n > usize::BITS as usize - 1 {
        return Err(Error::InvalidAtomNumber(format!("pattern too long: {n}")));
    }
    let mut idx = 0usize;
    for (j, c) in pattern.chars().enumerate() {
        match c {
            '0' => {}
            '1' => idx |= 1 << j,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "bit pattern may only contain '0' or '1', found {other:?}"
                )))
            }
        }
    }
    Ok((n, idx))
}

/// `(|0…0⟩ + |1…1⟩)/√2` over the full basis.
pub fn ghz_full(n: usize) -> Result<FullState> {
    check_full_size(n)?;
    let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n];
    amplitudes[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amplitudes[(1 << n) - 1] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    FullState::new(n, amplitudes)
}

/// `(|p⟩ + |p̄⟩)/√2` for a balanced pattern `p` (as many zeros as ones).
pub fn dfs_pattern_state(pattern: &str) -> Result<FullState> {
    let (n, idx) = parse_pattern(pattern)?;
    check_full_size(n)?;
    if n % 2 != 0 || idx.count_ones() as usize != n / 2 {
        return Err(Error::InvalidParameter(format!(
            "pattern {pattern:?} must contain equally many zeros and ones"
        )));
    }
    let complement = !idx & ((1 << n) - 1);
    let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n];
    amplitudes[idx] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amplitudes[complement] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    FullState::new(n, amplitudes)
}

/// Maps an arbitrary state onto the symmetric state whose amplitude in
/// `|k, N-k⟩` is the norm of the input's projection onto the `k`-excitation
/// sector. Sector phases are dropped (amplitudes are real, non-negative).
pub fn symmetrize(state: &FullState) -> SymmetricState {
    let n = state.n_atoms;
    let mut sector = vec![0.0; n + 1];
    for (idx, a) in state.amplitudes.iter().enumerate() {
        sector[zeros_in(idx, n)] += a.norm_sqr();
    }
    let amplitudes: Vec<C64> = sector.iter().map(|&s| C64::new(s.sqrt(), 0.0)).collect();
    SymmetricState::from_unnormalized(amplitudes)
        .expect("sector norms of a normalized state cannot all vanish")
}

/// Which of the three interrogation schemes a [`SchemeSpec`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    /// Identical transitions, all atoms shifted equally by the noise.
    Conventional,
    /// Two transition frequencies, equal noise shifts; estimates `ω_1 - ω_2`.
    DfsDelta,
    /// Two transition frequencies, opposite noise shifts; estimates
    /// `(ω_1 + ω_2)/2`.
    DfsOmega,
}

/// Atom group in two-frequency schemes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Group {
    A,
    B,
}

/// Reference laser frequencies defining the rotating frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum LaserFreqs {
    Single(f64),
    /// `(ω_L1, ω_L2)` for groups A and B.
    Pair(f64, f64),
}

impl LaserFreqs {
    pub fn for_group(&self, g: Group) -> f64 {
        match (*self, g) {
            (LaserFreqs::Single(w), _) => w,
            (LaserFreqs::Pair(w, _), Group::A) => w,
            (LaserFreqs::Pair(_, w), Group::B) => w,
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            LaserFreqs::Single(w) => w,
            LaserFreqs::Pair(a, b) => 0.5 * (a + b),
        }
    }
}

/// Per-atom transition frequencies, noise couplings and reference lasers.
///
/// The free Hamiltonian is `H_0 = Σ_j (ω_j - ω_L(j))/2 σ_z^j` and the noise
/// operator `L = Σ_j ε_j σ_z^j`; both are diagonal in the computational
/// basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemeSpec {
    kind: SchemeKind,
    omegas: Vec<f64>,
    couplings: Vec<f64>,
    lasers: LaserFreqs,
    partition: Vec<Group>,
}

impl SchemeSpec {
    pub fn new(
        kind: SchemeKind,
        omegas: Vec<f64>,
        couplings: Vec<f64>,
        lasers: LaserFreqs,
        partition: Vec<Group>,
    ) -> Result<Self> {
        let spec = Self {
            kind,
            omegas,
            couplings,
            lasers,
            partition,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn conventional(n: usize, omega: f64, laser: f64) -> Result<Self> {
        check_atoms(n)?;
        Self::new(
            SchemeKind::Conventional,
            vec![omega; n],
            vec![1.0; n],
            LaserFreqs::Single(laser),
            vec![Group::A; n],
        )
    }

    pub fn dfs_delta(partition: Vec<Group>, omega1: f64, omega2: f64, laser: f64) -> Result<Self> {
        let omegas = two_level_omegas(&partition, omega1, omega2);
        let n = partition.len();
        Self::new(
            SchemeKind::DfsDelta,
            omegas,
            vec![1.0; n],
            LaserFreqs::Single(laser),
            partition,
        )
    }

    pub fn dfs_omega(
        partition: Vec<Group>,
        omega1: f64,
        omega2: f64,
        laser1: f64,
        laser2: f64,
    ) -> Result<Self> {
        let omegas = two_level_omegas(&partition, omega1, omega2);
        let couplings = partition
            .iter()
            .map(|g| match g {
                Group::A => -1.0,
                Group::B => 1.0,
            })
            .collect();
        Self::new(
            SchemeKind::DfsOmega,
            omegas,
            couplings,
            LaserFreqs::Pair(laser1, laser2),
            partition,
        )
    }

    /// Atom 0 in A, atom 1 in B, and so on.
    pub fn alternating_partition(n: usize) -> Vec<Group> {
        (0..n)
            .map(|j| if j % 2 == 0 { Group::A } else { Group::B })
            .collect()
    }

    /// Atoms marked `'0'` go to A, atoms marked `'1'` to B.
    pub fn partition_from_pattern(pattern: &str) -> Result<Vec<Group>> {
        let (n, idx) = parse_pattern(pattern)?;
        Ok((0..n)
            .map(|j| if (idx >> j) & 1 == 0 { Group::A } else { Group::B })
            .collect())
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.omegas.len();
        check_atoms(n)?;
        for len in [self.couplings.len(), self.partition.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, got: len });
            }
        }
        if self.omegas.iter().chain(&self.couplings).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite frequency or coupling".into()));
        }
        let bad = |msg: &str| Err(Error::InvalidParameter(format!("{:?}: {msg}", self.kind)));
        match self.kind {
            SchemeKind::Conventional => {
                if self.omegas.iter().any(|&w| w != self.omegas[0]) {
                    return bad("all transition frequencies must be equal");
                }
                if self.couplings.iter().any(|&e| e != 1.0) {
                    return bad("all noise couplings must be 1");
                }
                if !matches!(self.lasers, LaserFreqs::Single(_)) {
                    return bad("uses a single laser");
                }
            }
            SchemeKind::DfsDelta | SchemeKind::DfsOmega => {
                let n_a = self.partition.iter().filter(|&&g| g == Group::A).count();
                if n % 2 != 0 || n_a != n / 2 {
                    return bad("needs an even number of atoms split equally into A and B");
                }
                let pick = |g| {
                    self.partition
                        .iter()
                        .zip(&self.omegas)
                        .filter(move |(p, _)| **p == g)
                        .map(|(_, w)| *w)
                };
                for g in [Group::A, Group::B] {
                    let first = pick(g).next().unwrap_or(0.0);
                    if pick(g).any(|w| w != first) {
                        return bad("transition frequency must be uniform within each group");
                    }
                }
                for (g, e) in self.partition.iter().zip(&self.couplings) {
                    let expected = match (self.kind, g) {
                        (SchemeKind::DfsOmega, Group::A) => -1.0,
                        _ => 1.0,
                    };
                    if *e != expected {
                        return bad("noise couplings inconsistent with scheme");
                    }
                }
                if self.kind == SchemeKind::DfsOmega && !matches!(self.lasers, LaserFreqs::Pair(..)) {
                    return bad("uses a laser pair");
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn n_atoms(&self) -> usize {
        self.omegas.len()
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn lasers(&self) -> LaserFreqs {
        self.lasers
    }

    pub fn partition(&self) -> &[Group] {
        &self.partition
    }

    /// `ω_j - ω_L(j)` for every atom.
    pub fn detunings(&self) -> Vec<f64> {
        self.omegas
            .iter()
            .zip(&self.partition)
            .map(|(w, g)| w - self.lasers.for_group(*g))
            .collect()
    }

    /// Diagonal of `H_0` over the computational basis.
    pub fn energies(&self) -> Vec<f64> {
        let det = self.detunings();
        (0..1usize << self.n_atoms())
            .map(|idx| det.iter().enumerate().map(|(j, d)| 0.5 * d * sigma_z(idx, j)).sum())
            .collect()
    }

    /// Diagonal of the noise operator `L` over the computational basis.
    pub fn noise_values(&self) -> Vec<f64> {
        (0..1usize << self.n_atoms())
            .map(|idx| {
                self.couplings
                    .iter()
                    .enumerate()
                    .map(|(j, e)| e * sigma_z(idx, j))
                    .sum()
            })
            .collect()
    }

    /// `L|ψ⟩` as a raw amplitude vector.
    pub fn apply_noise_operator(&self, state: &FullState) -> Result<Vec<C64>> {
        if state.n_atoms() != self.n_atoms() {
            return Err(Error::DimensionMismatch {
                expected: self.n_atoms(),
                got: state.n_atoms(),
            });
        }
        Ok(self
            .noise_values()
            .iter()
            .zip(state.amplitudes())
            .map(|(l, a)| a * *l)
            .collect())
    }
}

fn two_level_omegas(partition: &[Group], omega1: f64, omega2: f64) -> Vec<f64> {
    partition
        .iter()
        .map(|g| match g {
            Group::A => omega1,
            Group::B => omega2,
        })
        .collect()
}
