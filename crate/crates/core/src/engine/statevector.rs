use num_complex::Complex64;
use rand::{Rng, RngCore};

use super::kernels::apply_gate_flat;
use super::measure::{MeasureMode, MeasureOutcome, MeasureResult, ANNIHILATION_THRESHOLD};
use crate::circuit::Gate;
use crate::error::{PiteError, Result};
use crate::hamiltonian::PauliHamiltonian;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

impl StateVector {
    /// `|0...0>` on `n` qubits.
    pub fn zero(n_qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { n_qubits, amps }
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if index >= 1 << n_qubits {
            return Err(PiteError::InvalidArgument(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// Wraps amplitudes, normalizing them.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n_qubits {
            return Err(PiteError::InvalidArgument(format!(
                "{} amplitudes do not describe {n_qubits} qubits",
                amps.len()
            )));
        }
        let mut s = StateVector { n_qubits, amps };
        s.normalize()?;
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amps).sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(PiteError::InvalidArgument("state has zero norm".into()));
        }
        self.amps.iter_mut().for_each(|a| *a /= n);
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        apply_gate_flat(&mut self.amps, gate, 0, false);
        Ok(())
    }

    pub fn apply_gates(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply_gate(g))
    }

    /// Appends an ancilla in |0> as the new highest qubit.
    pub fn with_ancilla(&self) -> StateVector {
        let mut amps = self.amps.clone();
        amps.resize(2 * self.amps.len(), Complex64::new(0.0, 0.0));
        StateVector {
            n_qubits: self.n_qubits + 1,
            amps,
        }
    }

    pub fn expectation(&self, h: &PauliHamiltonian) -> Result<f64> {
        if h.n_qubits() != self.n_qubits {
            return Err(PiteError::InvalidArgument(format!(
                "{}-qubit Hamiltonian on a {}-qubit state",
                h.n_qubits(),
                self.n_qubits
            )));
        }
        Ok(h.expectation(&self.amps))
    }

    /// `|<other|self>|²` for normalized inputs.
    pub fn overlap_sqr(&self, other: &[Complex64]) -> f64 {
        self.amps
            .iter()
            .zip(other)
            .map(|(a, b)| b.conj() * a)
            .sum::<Complex64>()
            .norm_sqr()
    }

    /// Squared norm of the projection onto the span of orthonormal `vectors`.
    pub fn subspace_fidelity(&self, vectors: &[Vec<Complex64>]) -> f64 {
        vectors.iter().map(|v| self.overlap_sqr(v)).sum()
    }

    /// Measures the highest qubit and drops it from the register.
    pub fn measure_ancilla(&self, mode: MeasureMode, rng: &mut dyn RngCore) -> Result<MeasureResult<StateVector>> {
        if self.n_qubits < 2 {
            return Err(PiteError::InvalidArgument("no ancilla to measure".into()));
        }
        let half = self.amps.len() / 2;
        let total = norm_sqr(&self.amps);
        let prob0 = norm_sqr(&self.amps[..half]) / total;
        let outcome = match mode {
            MeasureMode::Postselect => {
                if prob0 < ANNIHILATION_THRESHOLD {
                    return Err(PiteError::Annihilated { prob0 });
                }
                MeasureOutcome::Postselected
            }
            MeasureMode::Sample => {
                if rng.gen::<f64>() < prob0 {
                    MeasureOutcome::Sampled0
                } else {
                    MeasureOutcome::Sampled1
                }
            }
        };
        let part = if outcome.succeeded() {
            &self.amps[..half]
        } else {
            &self.amps[half..]
        };
        let state = StateVector::from_amplitudes(self.n_qubits - 1, part.to_vec())?;
        Ok(MeasureResult { prob0, state, outcome })
    }
}
