//! Grouped Hamiltonians for the generalized step: Pauli terms summed into
//! small dense blocks whose full eigensystems drive the circuit.
//!
//! GroupSpec file format, one group per line, 1-based term indices:
//!
//! ```text
//! # three blocks over a 6-term Hamiltonian
//! 1,2,3
//! 4,5
//! 6
//! ```

mod block;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use block::{embed_matrix, GroupedBlock, MAX_BLOCK_SUPPORT};

use crate::error::{PiteError, Result};
use crate::hamiltonian::{build_ising, ising_site_terms, lih_groups_text, PauliHamiltonian};

/// A partition of the Hamiltonian's non-identity terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    /// 1-based indices into the term list.
    pub groups: Vec<Vec<usize>>,
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut groups = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let group = line
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<usize>().map_err(|_| PiteError::Parse {
                        line: idx + 1,
                        msg: format!("invalid term index \"{}\"", tok.trim()),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            groups.push(group);
        }
        if groups.is_empty() {
            return Err(PiteError::Parse {
                line: 0,
                msg: "grouping file has no groups".into(),
            });
        }
        Ok(GroupSpec { groups })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.groups {
            let line: Vec<String> = g.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    /// One group per term.
    pub fn singletons(m: usize) -> Self {
        GroupSpec {
            groups: (1..=m).map(|k| vec![k]).collect(),
        }
    }

    /// The shipped 22-block LiH grouping.
    pub fn lih() -> Self {
        GroupSpec::parse(lih_groups_text()).expect("embedded LiH grouping parses")
    }

    /// Checks that the groups partition `{1..m}`.
    pub fn validate(&self, m: usize) -> Result<()> {
        let mut seen = vec![false; m + 1];
        for (gi, g) in self.groups.iter().enumerate() {
            if g.is_empty() {
                return Err(PiteError::InvalidGrouping(format!("group {} is empty", gi + 1)));
            }
            for &k in g {
                if k == 0 || k > m {
                    return Err(PiteError::InvalidGrouping(format!("term index {k} outside 1..={m}")));
                }
                if seen[k] {
                    return Err(PiteError::InvalidGrouping(format!(
                        "term index {k} appears more than once"
                    )));
                }
                seen[k] = true;
            }
        }
        if let Some(k) = (1..=m).find(|&k| !seen[k]) {
            return Err(PiteError::InvalidGrouping(format!(
                "term index {k} is not in any group"
            )));
        }
        Ok(())
    }
}

/// Builds and diagonalizes one block per group.
pub fn group_hamiltonian(h: &PauliHamiltonian, spec: &GroupSpec) -> Result<Vec<GroupedBlock>> {
    spec.validate(h.terms().len())?;
    spec.groups
        .iter()
        .map(|g| {
            let idx: Vec<usize> = g.iter().map(|k| k - 1).collect();
            GroupedBlock::from_terms(h, &idx)
        })
        .collect()
}

/// One block per site `k`: `-J(Z_k Z_{k+1} + g X_k + h Z_k)` on `{k, k+1 mod n}`.
pub fn ising_local_grouping(n: usize, j: f64, g: f64, h: f64) -> Result<(GroupSpec, Vec<GroupedBlock>)> {
    let ham = build_ising(n, j, g, h)?;
    let mut groups = vec![Vec::new(); n];
    let mut next = 1;
    for t in ising_site_terms(n, j, g, h)? {
        if t.coeff != 0.0 {
            groups[t.site].push(next);
            next += 1;
        }
    }
    let spec = GroupSpec { groups };
    let blocks = group_hamiltonian(&ham, &spec)?;
    Ok((spec, blocks))
}

/// `Σ_k λ[k]₀`.
pub fn sum_block_minima(blocks: &[GroupedBlock]) -> f64 {
    blocks.iter().map(|b| b.lambda0).sum()
}

/// A Hamiltonian split into blocks, ready for the generalized driver.
#[derive(Clone, Debug)]
pub struct GroupedHamiltonian {
    /// The ungrouped Hamiltonian, used for observables.
    pub hamiltonian: PauliHamiltonian,
    pub n_qubits: usize,
    pub identity_offset: f64,
    pub spec: GroupSpec,
    pub blocks: Vec<GroupedBlock>,
}

impl GroupedHamiltonian {
    pub fn new(h: &PauliHamiltonian, spec: GroupSpec) -> Result<Self> {
        let blocks = group_hamiltonian(h, &spec)?;
        Ok(GroupedHamiltonian {
            hamiltonian: h.clone(),
            n_qubits: h.n_qubits(),
            identity_offset: h.identity_offset(),
            spec,
            blocks,
        })
    }

    pub fn block_minima(&self) -> f64 {
        sum_block_minima(&self.blocks)
    }

    /// Σ of blocks embedded on the full register, offset excluded.
    pub fn dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n_qubits;
        let mut out = DMatrix::zeros(dim, dim);
        for b in &self.blocks {
            out += b.embedded(self.n_qubits);
        }
        out
    }

    /// Qubits touched by at least one block.
    pub fn covered_qubits(&self) -> BTreeSet<usize> {
        self.blocks.iter().flat_map(|b| b.support.iter().copied()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_h2, build_lih};

    #[test]
    fn parse_and_validate() {
        let s = GroupSpec::parse("# c\n1,2, 3\n\n4 # tail\n").unwrap();
        assert_eq!(s.groups, vec![vec![1, 2, 3], vec![4]]);
        s.validate(4).unwrap();
        assert!(s.validate(5).is_err());
        assert!(s.validate(3).is_err());
        assert!(GroupSpec::parse("1,2\n2,3").unwrap().validate(3).is_err());
        assert!(GroupSpec::parse("1,x").is_err());
        assert!(GroupSpec::parse("# none").is_err());
        assert_eq!(GroupSpec::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn singleton_blocks_are_two_level() {
        let h = build_h2(0.75).unwrap();
        let blocks = group_hamiltonian(&h, &GroupSpec::singletons(4)).unwrap();
        for (b, t) in blocks.iter().zip(h.terms()) {
            assert!((b.lambda0 + t.coeff().abs()).abs() < 1e-14);
            let top = b.eigenvalues.last().unwrap();
            assert!((top - t.coeff().abs()).abs() < 1e-14);
        }
        assert!((sum_block_minima(&blocks) + h.abs_coeff_sum()).abs() < 1e-14);
        assert_eq!(sum_block_minima(&[]), 0.0);
    }

    #[test]
    fn lih_grouping_raises_block_minima() {
        let h = build_lih();
        let spec = GroupSpec::lih();
        assert_eq!(spec.groups.len(), 22);
        let gh = GroupedHamiltonian::new(&h, spec).unwrap();
        assert!(gh.blocks.iter().all(|b| b.support.len() <= MAX_BLOCK_SUPPORT));
        assert!(gh.block_minima() > -h.abs_coeff_sum());
        let mut bare = h.dense();
        for i in 0..bare.nrows() {
            bare[(i, i)] -= Complex64::new(h.identity_offset(), 0.0);
        }
        assert!((gh.dense() - bare).norm() < 1e-10);
    }

    #[test]
    fn ising_blocks_closed_form() {
        let (g, hh) = (1.2, 0.3);
        let (spec, blocks) = ising_local_grouping(10, 1.0, g, hh).unwrap();
        assert_eq!(spec.groups.len(), 10);
        assert_eq!(blocks[9].support, vec![0, 9]);
        let l0 = -(g * g + (hh + 1.0f64).powi(2)).sqrt();
        let l1 = -(g * g + (hh - 1.0f64).powi(2)).sqrt();
        for b in &blocks {
            assert!((b.eigenvalues[0] - l0).abs() < 1e-10);
            assert!((b.eigenvalues[1] - l1).abs() < 1e-10);
            assert!((b.eigenvalues[2] + l1).abs() < 1e-10);
            assert!((b.eigenvalues[3] + l0).abs() < 1e-10);
        }
        assert!((sum_block_minima(&blocks) + 10.0 * 3.13f64.sqrt()).abs() < 1e-9);
        let ham = build_ising(10, 1.0, g, hh).unwrap();
        let gh = GroupedHamiltonian::new(&ham, spec).unwrap();
        assert_eq!(gh.covered_qubits().len(), 10);
    }

    #[test]
    fn ising_degenerate_blocks() {
        let (_, blocks) = ising_local_grouping(4, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(blocks[0].eigenvalues, vec![-1.0, -1.0, 1.0, 1.0]);
        assert_eq!(blocks[0].omegas, vec![0.0, 0.0, 2.0, 2.0]);
        let (_, blocks) = ising_local_grouping(4, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(blocks[0].omegas[1], 0.0);
        assert!((blocks[0].lambda0 + 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn oversized_support_rejected() {
        let h = PauliHamiltonian::parse("1 XXXXXXX\n1 ZIIIIII").unwrap();
        let err = group_hamiltonian(&h, &GroupSpec::parse("1,2").unwrap()).unwrap_err();
        assert!(matches!(err, PiteError::SupportTooLarge { size: 7, limit: 6 }));
    }
}
