//! Statevector simulation of expectation-value estimators for Hermitian
//! observables written as weighted Pauli sums.
//!
//! Three estimators are provided: a per-term Hadamard test, and a
//! linear-combination-of-unitaries (LCU) block followed by either a SWAP test
//! or a destructive SWAP test. Supporting modules cover Pauli algebra,
//! Jordan-Wigner and Gray-code encodings of one-body operators, prepare-circuit
//! synthesis, and a small variational eigensolver.
//!
//! Qubit 0 is always the least-significant bit of a basis-state index.

pub mod data;
pub mod encode;
pub mod error;
pub mod lcu;
pub mod overlap;
pub mod parallel;
pub mod pauli;
pub mod rng;
pub mod simulator;
pub mod vqe;

pub use error::{Error, Result};
pub use num_complex::Complex64;
