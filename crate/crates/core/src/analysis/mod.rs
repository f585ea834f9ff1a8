//! Exact diagonalization and the closed-form fidelity and success-probability bounds.

mod bounds;
mod jacobi;
mod spectrum;

pub use bounds::{
    alb, alb_generalized, beta_for_error, fidelity_bound, kappa_exponents, rlb, rlb_from_sum, KappaExponents,
};
pub use jacobi::{hermitian_defect, jacobi_eigen, max_residual, Eigen, JACOBI_MAX_SWEEPS, JACOBI_TOL};
pub use spectrum::{diagonalize, hermitian_eigen, SpectrumInfo, DEGENERACY_TOL, JACOBI_MAX_DIM, MAX_DIAG_QUBITS};
