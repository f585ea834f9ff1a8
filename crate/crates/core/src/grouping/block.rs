use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::analysis::{hermitian_defect, jacobi_eigen, DEGENERACY_TOL};
use crate::error::{PiteError, Result};
use crate::hamiltonian::{PauliHamiltonian, PauliTerm};

/// Largest block support the generalized step accepts.
pub const MAX_BLOCK_SUPPORT: usize = 6;

/// A sum of Pauli terms restricted to its support, with its eigensystem.
///
/// Local basis index bit `j` is qubit `support[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupedBlock {
    pub support: Vec<usize>,
    /// 0-based indices into the Hamiltonian's term list.
    pub term_indices: Vec<usize>,
    pub matrix: DMatrix<Complex64>,
    /// Ascending; degenerate clusters share one value.
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the eigenvector mapped to local basis state `i`.
    pub eigenvectors: DMatrix<Complex64>,
    pub lambda0: f64,
    /// `ω_i = λ_i - λ₀`.
    pub omegas: Vec<f64>,
}

fn restrict(term: &PauliTerm, support: &[usize]) -> Result<PauliTerm> {
    PauliTerm::new(term.coeff(), support.iter().map(|&q| term.axes()[q]).collect())
}

/// Sign and phase convention: the first non-negligible entry is real positive.
fn fix_phase(v: &mut [Complex64]) {
    if let Some(a) = v.iter().find(|a| a.norm() > 1e-12).copied() {
        let p = a.conj() / a.norm();
        v.iter_mut().for_each(|x| *x *= p);
    }
}

fn lex_desc(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        for (p, q) in [(x.re, y.re), (x.im, y.im)] {
            if (p - q).abs() > 1e-12 {
                return q.total_cmp(&p);
            }
        }
    }
    Ordering::Equal
}

impl GroupedBlock {
    pub fn from_terms(h: &PauliHamiltonian, term_indices: &[usize]) -> Result<Self> {
        let terms = h.terms();
        if let Some(&k) = term_indices.iter().find(|&&k| k >= terms.len()) {
            return Err(PiteError::InvalidGrouping(format!("term index {} out of range", k + 1)));
        }
        let mut support: Vec<usize> = term_indices.iter().flat_map(|&k| terms[k].support()).collect();
        support.sort_unstable();
        support.dedup();
        if support.len() > MAX_BLOCK_SUPPORT {
            return Err(PiteError::SupportTooLarge {
                size: support.len(),
                limit: MAX_BLOCK_SUPPORT,
            });
        }
        let dim = 1usize << support.len();
        let mut matrix = DMatrix::zeros(dim, dim);
        for &k in term_indices {
            matrix += restrict(&terms[k], &support)?.dense();
        }
        let mut block = GroupedBlock::from_matrix(support, matrix)?;
        block.term_indices = term_indices.to_vec();
        Ok(block)
    }

    /// Eigendecomposes a Hermitian matrix acting on `support`.
    pub fn from_matrix(support: Vec<usize>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = 1usize << support.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(PiteError::InvalidGrouping(format!(
                "block matrix is {}x{}, expected {dim}x{dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if hermitian_defect(&matrix) > 1e-12 {
            return Err(PiteError::InvalidGrouping("block matrix is not Hermitian".into()));
        }
        let eig = jacobi_eigen(&matrix)?;
        let mut vecs: Vec<Vec<Complex64>> = (0..dim)
            .map(|i| {
                let mut v: Vec<Complex64> = eig.vectors.column(i).iter().copied().collect();
                fix_phase(&mut v);
                v
            })
            .collect();

        let mut values = eig.values.clone();
        let mut start = 0;
        while start < dim {
            let mut end = start + 1;
            while end < dim && values[end] - values[start] <= DEGENERACY_TOL {
                end += 1;
            }
            let shared = values[start];
            values[start..end].iter_mut().for_each(|v| *v = shared);
            vecs[start..end].sort_by(|a, b| lex_desc(a, b));
            start = end;
        }
        let lambda0 = values[0];
        let omegas = values.iter().map(|v| v - lambda0).collect();
        let eigenvectors = DMatrix::from_fn(dim, dim, |r, c| vecs[c][r]);
        Ok(GroupedBlock {
            support,
            term_indices: Vec::new(),
            matrix,
            eigenvalues: values,
            eigenvectors,
            lambda0,
            omegas,
        })
    }

    /// Largest `‖H v_i - λ_i v_i‖` over the stored pairs.
    pub fn eigen_residual(&self) -> f64 {
        (0..self.eigenvalues.len())
            .map(|i| {
                let col = self.eigenvectors.column(i);
                (&self.matrix * col - col * Complex64::new(self.eigenvalues[i], 0.0)).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `e^{-(H[k] - λ₀)Δt}` on the support.
    pub fn shifted_propagator(&self, dt: f64) -> DMatrix<Complex64> {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.omegas.len(),
            self.omegas.iter().map(|w| Complex64::new((-w * dt).exp(), 0.0)),
        ));
        &self.eigenvectors * d * self.eigenvectors.adjoint()
    }

    /// The block as a `2^n × 2^n` matrix on the full register.
    pub fn embedded(&self, n: usize) -> DMatrix<Complex64> {
        embed_matrix(&self.matrix, &self.support, n)
    }
}

/// Places a matrix on `support` into an `n`-qubit register, identity elsewhere.
pub fn embed_matrix(local: &DMatrix<Complex64>, support: &[usize], n: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    let mask: usize = support.iter().map(|&q| 1 << q).sum();
    let local_of = |b: usize| -> usize { support.iter().enumerate().map(|(j, &q)| ((b >> q) & 1) << j).sum() };
    DMatrix::from_fn(dim, dim, |r, c| {
        if r & !mask == c & !mask {
            local[(local_of(r), local_of(c))]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_block_has_zero_omegas() {
        let m = DMatrix::from_diagonal_element(4, 4, Complex64::new(0.7, 0.0));
        let b = GroupedBlock::from_matrix(vec![1, 3], m).unwrap();
        assert!(b.omegas.iter().all(|&w| w == 0.0));
        assert_eq!(b.eigenvectors, DMatrix::identity(4, 4));
    }

    #[test]
    fn residual_small_for_lih_blocks() {
        let h = crate::hamiltonian::build_lih();
        let spec = crate::grouping::GroupSpec::lih();
        for g in &spec.groups {
            let idx: Vec<usize> = g.iter().map(|k| k - 1).collect();
            let b = GroupedBlock::from_terms(&h, &idx).unwrap();
            assert!(b.eigen_residual() < 1e-10);
            assert!(b.omegas.iter().all(|&w| w >= 0.0));
        }
    }

    #[test]
    fn embedding_matches_full_term() {
        let h = PauliHamiltonian::parse("0.3 IXIY\n-0.2 IZII").unwrap();
        let b = GroupedBlock::from_terms(&h, &[0, 1]).unwrap();
        assert_eq!(b.support, vec![1, 3]);
        assert!((b.embedded(4) - h.dense()).norm() < 1e-14);
    }
}
