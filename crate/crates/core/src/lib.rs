//! Frequency estimation with `N` two-level atoms subject to collective
//! dephasing.
//!
//! The crate is organised bottom-up:
//!
//! - [`symstate`]: probe states in the symmetric (Fock) subspace and in the
//!   full `2^N` computational basis, plus the scheme descriptions that fix
//!   the free Hamiltonian and the noise operator.
//! - [`dynamics`]: closed-form evolution under collective dephasing and a
//!   stochastic trajectory simulator that reproduces it on average.
//! - [`fisher`]: quantum and classical Fisher information and Cramér-Rao
//!   bounds.
//! - [`optimize`]: maximisation of the quantum Fisher information over
//!   symmetric probe states and interrogation times.
//! - [`dfs`]: decoherence-free Ramsey schemes with imperfect preparation,
//!   gates and detection.
//! - [`mle`]: maximum-likelihood estimators and their exact finite-sample
//!   uncertainty.
//! - [`cli`]: figure-data commands used by the `qfreq` binary.

pub mod cli;
pub mod dfs;
pub mod dynamics;
pub mod error;
pub mod fisher;
pub mod linalg;
pub mod mle;
pub mod optimize;
pub mod symstate;
mod util;

pub use error::{Error, Result};

pub use num_complex::Complex64 as C64;
