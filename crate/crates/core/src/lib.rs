//! Probabilistic imaginary-time evolution: gate-level step circuits built from
//! Pauli-string Hamiltonians, statevector and noisy density-matrix simulation
//! with ancilla post-selection, exact-diagonalization oracles and success
//! probability bounds.

// `!(x > 0.0)` style checks deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod circuit;
pub mod cli;
pub mod engine;
pub mod error;
pub mod grouping;
pub mod hamiltonian;
pub mod pite;

pub use error::{PiteError, Result};
