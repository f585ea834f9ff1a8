use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::jacobi::{jacobi_eigen, Eigen};
use crate::error::{PiteError, Result};
use crate::hamiltonian::PauliHamiltonian;

/// Largest register the dense oracle accepts.
pub const MAX_DIAG_QUBITS: usize = 12;
/// Matrices up to this dimension go through the Jacobi solver.
pub const JACOBI_MAX_DIM: usize = 256;
/// Energies closer than this count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Hermitian eigendecomposition, Jacobi for small matrices and a
/// tridiagonal QR solver above [`JACOBI_MAX_DIM`].
pub fn hermitian_eigen(matrix: &DMatrix<Complex64>) -> Result<Eigen> {
    let n = matrix.nrows();
    if n <= JACOBI_MAX_DIM {
        return jacobi_eigen(matrix);
    }
    let (values, vectors) = if matrix.iter().all(|z| z.im == 0.0) {
        let real = matrix.map(|z| z.re);
        let e = SymmetricEigen::new(real);
        (
            e.eigenvalues.as_slice().to_vec(),
            e.eigenvectors.map(|x| Complex64::new(x, 0.0)),
        )
    } else {
        let e = SymmetricEigen::new(matrix.clone());
        (e.eigenvalues.as_slice().to_vec(), e.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    Ok(Eigen {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: DMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]),
        sweeps: 0,
    })
}

/// Exact eigendata of a Hamiltonian together with the overlaps of one
/// initial state.
#[derive(Clone, Debug)]
pub struct SpectrumInfo {
    /// Ascending, identity offset included.
    pub energies: Vec<f64>,
    pub eigenvectors: DMatrix<Complex64>,
    /// `⟨E_i|Φ₀⟩`
    pub amplitudes: Vec<Complex64>,
    /// `s_i = |⟨E_i|Φ₀⟩|²`
    pub overlaps: Vec<f64>,
    /// Number of eigenvectors spanning the ground space.
    pub ground_dim: usize,
    /// Overlap of the initial state with the whole ground space.
    pub s0: f64,
    /// First strictly positive gap `Ω₁`, 0 when the spectrum is flat.
    pub gap_1: f64,
    pub gap_max: f64,
    pub degenerate: bool,
    pub identity_offset: f64,
}

impl SpectrumInfo {
    pub fn e0(&self) -> f64 {
        self.energies[0]
    }

    /// Ground energy without the identity offset.
    pub fn e_ground_bare(&self) -> f64 {
        self.energies[0] - self.identity_offset
    }

    pub fn ground_vectors(&self) -> Vec<Vec<Complex64>> {
        (0..self.ground_dim)
            .map(|i| self.eigenvectors.column(i).iter().copied().collect())
            .collect()
    }

    /// Squared norm of the projection of `psi` onto the ground space.
    pub fn ground_fidelity(&self, psi: &[Complex64]) -> f64 {
        (0..self.ground_dim)
            .map(|i| {
                self.eigenvectors
                    .column(i)
                    .iter()
                    .zip(psi)
                    .map(|(v, a)| v.conj() * a)
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum()
    }

    fn ite_weights(&self, beta: f64) -> Vec<f64> {
        let e0 = self.e0();
        self.overlaps
            .iter()
            .zip(&self.energies)
            .map(|(s, e)| s * (-2.0 * beta * (e - e0)).exp())
            .collect()
    }

    /// Normalized `e^{-βH}|Φ₀⟩` built from the eigendecomposition.
    pub fn exact_ite_state(&self, beta: f64) -> Vec<Complex64> {
        let e0 = self.e0();
        let dim = self.energies.len();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (i, (&a, &e)) in self.amplitudes.iter().zip(&self.energies).enumerate() {
            let w = a * (-beta * (e - e0)).exp();
            if w.norm() == 0.0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(self.eigenvectors.column(i).iter()) {
                *o += w * v;
            }
        }
        let norm = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        out.iter_mut().for_each(|z| *z /= norm);
        out
    }

    pub fn exact_ite_energy(&self, beta: f64) -> f64 {
        let w = self.ite_weights(beta);
        let total: f64 = w.iter().sum();
        w.iter().zip(&self.energies).map(|(w, e)| w * e).sum::<f64>() / total
    }

    pub fn exact_ite_fidelity(&self, beta: f64) -> f64 {
        let w = self.ite_weights(beta);
        let total: f64 = w.iter().sum();
        w[..self.ground_dim].iter().sum::<f64>() / total
    }
}

/// Full eigendecomposition of the dense Hamiltonian (offset included) with
/// overlaps against `init`.
pub fn diagonalize(h: &PauliHamiltonian, init: &[Complex64]) -> Result<SpectrumInfo> {
    let n = h.n_qubits();
    if n > MAX_DIAG_QUBITS {
        return Err(PiteError::DimensionTooLarge {
            what: "exact diagonalization",
            n_qubits: n,
            limit: MAX_DIAG_QUBITS,
        });
    }
    if init.len() != h.dim() {
        return Err(PiteError::InvalidArgument(format!(
            "initial state has {} amplitudes, expected {}",
            init.len(),
            h.dim()
        )));
    }
    let eig = hermitian_eigen(&h.dense())?;
    Ok(spectrum_from_eigen(eig, init, h.identity_offset()))
}

pub(crate) fn spectrum_from_eigen(eig: Eigen, init: &[Complex64], identity_offset: f64) -> SpectrumInfo {
    let energies = eig.values;
    let e0 = energies[0];
    let ground_dim = energies.iter().take_while(|&&e| e - e0 <= DEGENERACY_TOL).count();
    let gap_1 = energies.get(ground_dim).map_or(0.0, |e| e - e0);
    let gap_max = energies[energies.len() - 1] - e0;
    let amplitudes: Vec<Complex64> = (0..energies.len())
        .map(|i| eig.vectors.column(i).iter().zip(init).map(|(v, a)| v.conj() * a).sum())
        .collect();
    let overlaps: Vec<f64> = amplitudes.iter().map(|a| a.norm_sqr()).collect();
    let s0 = overlaps[..ground_dim].iter().sum();
    SpectrumInfo {
        energies,
        eigenvectors: eig.vectors,
        amplitudes,
        overlaps,
        ground_dim,
        s0,
        gap_1,
        gap_max,
        degenerate: ground_dim > 1,
        identity_offset,
    }
}
