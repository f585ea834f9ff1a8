use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngCore};

use super::kernels::apply_gate_flat;
use super::measure::{MeasureMode, MeasureOutcome, MeasureResult, ANNIHILATION_THRESHOLD};
use super::noise::NoiseModel;
use super::StateVector;
use crate::circuit::Gate;
use crate::error::{PiteError, Result};
use crate::hamiltonian::PauliHamiltonian;

/// Largest register held as a density matrix.
pub const MAX_DENSITY_QUBITS: usize = 12;

/// `ρ` stored row-major as `data[(row << n) | col]`, i.e. a vector on `2n`
/// qubits whose low half indexes columns and high half rows.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn from_pure(state: &StateVector) -> Result<Self> {
        let n = state.n_qubits();
        check_size(n)?;
        let a = state.amplitudes();
        let dim = a.len();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[(r << n) | c] = a[r] * a[c].conj();
            }
        }
        Ok(DensityMatrix { n_qubits: n, data })
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Result<Self> {
        let dim = m.nrows();
        if !dim.is_power_of_two() || m.ncols() != dim {
            return Err(PiteError::InvalidArgument(format!(
                "{}x{} matrix is not a qubit density matrix",
                m.nrows(),
                m.ncols()
            )));
        }
        let n = dim.trailing_zeros() as usize;
        check_size(n)?;
        let data = (0..dim * dim).map(|i| m[(i >> n, i & (dim - 1))]).collect();
        Ok(DensityMatrix { n_qubits: n, data })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row << self.n_qubits) | col]
    }

    pub(crate) fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entry(i, i).re).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let t = self.trace();
        if !(t > 0.0) {
            return Err(PiteError::InvalidArgument("density matrix has zero trace".into()));
        }
        self.data.iter_mut().for_each(|z| *z /= t);
        Ok(())
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim(), self.dim(), |r, c| self.entry(r, c))
    }

    /// `max |ρ_rc - conj(ρ_cr)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.entry(r, c) - self.entry(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn purity(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.trace().powi(2)
    }

    /// `ρ -> U ρ U†`.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        apply_gate_flat(&mut self.data, gate, self.n_qubits, false);
        apply_gate_flat(&mut self.data, gate, 0, true);
        Ok(())
    }

    pub fn apply_gates(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply_gate(g))
    }

    /// The channel on every qubit in ascending order.
    pub fn apply_noise(&mut self, model: &NoiseModel) {
        for q in 0..self.n_qubits {
            model.apply_dm(&mut self.data, self.n_qubits, q);
        }
    }

    pub fn apply_noise_qubit(&mut self, model: &NoiseModel, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(PiteError::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            });
        }
        model.apply_dm(&mut self.data, self.n_qubits, q);
        Ok(())
    }

    /// `ρ ⊗ |0><0|` with the ancilla as the new highest qubit.
    pub fn with_ancilla(&self) -> Result<DensityMatrix> {
        let n = self.n_qubits;
        check_size(n + 1)?;
        let dim = self.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); 4 * dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[(r << (n + 1)) | c] = self.entry(r, c);
            }
        }
        Ok(DensityMatrix { n_qubits: n + 1, data })
    }

    /// `Tr(ρH) / Tr ρ`, identity offset included.
    pub fn expectation(&self, h: &PauliHamiltonian) -> Result<f64> {
        if h.n_qubits() != self.n_qubits {
            return Err(PiteError::InvalidArgument(format!(
                "{}-qubit Hamiltonian on a {}-qubit density matrix",
                h.n_qubits(),
                self.n_qubits
            )));
        }
        let mut e = 0.0;
        for t in h.terms() {
            let m = t.masks();
            let acc: Complex64 = (0..self.dim()).map(|b| self.entry(b, b ^ m.x) * m.phase(b)).sum();
            e += t.coeff() * acc.re;
        }
        Ok(e / self.trace() + h.identity_offset())
    }

    /// `Σ_v <v|ρ|v> / Tr ρ` over orthonormal `vectors`.
    pub fn subspace_fidelity(&self, vectors: &[Vec<Complex64>]) -> f64 {
        let d = self.dim();
        let mut f = 0.0;
        for v in vectors {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..d {
                if v[r].norm_sqr() == 0.0 {
                    continue;
                }
                let row = &self.data[r << self.n_qubits..(r + 1) << self.n_qubits];
                let rv: Complex64 = row.iter().zip(v).map(|(x, y)| x * y).sum();
                acc += v[r].conj() * rv;
            }
            f += acc.re;
        }
        f / self.trace()
    }

    /// Measures the highest qubit and traces it out of the conditioned state.
    pub fn measure_ancilla(&self, mode: MeasureMode, rng: &mut dyn RngCore) -> Result<MeasureResult<DensityMatrix>> {
        let n = self.n_qubits;
        if n < 2 {
            return Err(PiteError::InvalidArgument("no ancilla to measure".into()));
        }
        let half = self.dim() / 2;
        let total = self.trace();
        let p0: f64 = (0..half).map(|i| self.entry(i, i).re).sum::<f64>() / total;
        let outcome = match mode {
            MeasureMode::Postselect => {
                if p0 < ANNIHILATION_THRESHOLD {
                    return Err(PiteError::Annihilated { prob0: p0 });
                }
                MeasureOutcome::Postselected
            }
            MeasureMode::Sample => {
                if rng.gen::<f64>() < p0 {
                    MeasureOutcome::Sampled0
                } else {
                    MeasureOutcome::Sampled1
                }
            }
        };
        let shift = if outcome.succeeded() { 0 } else { half };
        let mut data = vec![Complex64::new(0.0, 0.0); half * half];
        for r in 0..half {
            for c in 0..half {
                data[(r << (n - 1)) | c] = self.entry(r + shift, c + shift);
            }
        }
        let mut state = DensityMatrix { n_qubits: n - 1, data };
        state.normalize()?;
        Ok(MeasureResult {
            prob0: p0,
            state,
            outcome,
        })
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_DENSITY_QUBITS {
        return Err(PiteError::DimensionTooLarge {
            what: "density-matrix simulation",
            n_qubits: n,
            limit: MAX_DENSITY_QUBITS,
        });
    }
    Ok(())
}
