//! Dense reference operators used to check the gate-level circuits.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::StateVector;
use crate::circuit::{Circuit, Gate};
use crate::error::{PiteError, Result};
use crate::hamiltonian::PauliTerm;

/// Register size accepted by the dense oracles.
pub const MAX_ORACLE_QUBITS: usize = 12;

fn check_oracle_size(n: usize) -> Result<()> {
    if n > MAX_ORACLE_QUBITS {
        return Err(PiteError::DimensionTooLarge {
            what: "dense oracle",
            n_qubits: n,
            limit: MAX_ORACLE_QUBITS,
        });
    }
    Ok(())
}

/// Normalized `e^{-c h Δt}|ψ> = cosh(|c|Δt)|ψ> - sinh(|c|Δt) sign(c) h|ψ>`.
pub fn dense_step_oracle(term: &PauliTerm, dt: f64, state: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = term.n_qubits();
    check_oracle_size(n)?;
    if state.len() != 1 << n {
        return Err(PiteError::InvalidArgument(format!(
            "state has {} amplitudes, term acts on {n} qubits",
            state.len()
        )));
    }
    let a = term.coeff().abs() * dt;
    let unit = PauliTerm::new(term.coeff().signum(), term.axes().to_vec())?;
    let mut out: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); state.len()];
    unit.apply_add(state, &mut out);
    let (ch, sh) = (a.cosh(), a.sinh());
    for (o, s) in out.iter_mut().zip(state) {
        *o = s * ch - *o * sh;
    }
    let norm = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    out.iter_mut().for_each(|z| *z /= norm);
    Ok(out)
}

/// Dense unitary of a gate list on `n` qubits.
pub fn gates_unitary(gates: &[Gate], n: usize) -> Result<DMatrix<Complex64>> {
    check_oracle_size(n)?;
    let dim = 1usize << n;
    let mut u = DMatrix::zeros(dim, dim);
    for b in 0..dim {
        let mut s = StateVector::basis(n, b)?;
        s.apply_gates(gates)?;
        for (r, a) in s.amplitudes().iter().enumerate() {
            u[(r, b)] = *a;
        }
    }
    Ok(u)
}

/// Work-register operator of a step circuit on the ancilla-|0> branch,
/// unnormalized: `(<0|_anc ⊗ I) · post · pre · (|0>_anc ⊗ I)`.
pub fn postselected_operator(step: &Circuit) -> Result<DMatrix<Complex64>> {
    let n = step.n_work();
    check_oracle_size(n + 1)?;
    if !step.has_ancilla() || step.measure_point().is_none() {
        return Err(PiteError::InvalidCircuit(
            "step circuit has no ancilla measurement".into(),
        ));
    }
    let dim = 1usize << n;
    let mut op = DMatrix::zeros(dim, dim);
    for b in 0..dim {
        let mut full = StateVector::basis(n, b)?.with_ancilla();
        full.apply_gates(step.before_measurement())?;
        let mut amps = full.into_amplitudes();
        amps.truncate(dim);
        let mut work = StateVector::basis(n, 0)?;
        work.amplitudes_mut().copy_from_slice(&amps);
        for g in step.after_measurement() {
            g.validate(n)?;
            work.apply_gate(g)?;
        }
        for (r, a) in work.amplitudes().iter().enumerate() {
            op[(r, b)] = *a;
        }
    }
    Ok(op)
}

/// `min_φ ‖a - e^{iφ} b‖` after scaling both to unit Frobenius norm.
pub fn distance_up_to_phase(a: &[Complex64], b: &[Complex64]) -> f64 {
    let na = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nb = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let inner: Complex64 = a.iter().zip(b).map(|(x, y)| y.conj() * x).sum();
    let phase = if inner.norm() > 0.0 {
        inner / inner.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x / na - y * phase / nb).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// [`distance_up_to_phase`] for matrices.
pub fn matrix_distance_up_to_phase(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    distance_up_to_phase(a.as_slice(), b.as_slice())
}
