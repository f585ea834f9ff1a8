use std::fs;
use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::SpectrumInfo;
use crate::error::{PiteError, Result};
use crate::grouping::{ising_local_grouping, GroupSpec, GroupedHamiltonian};
use crate::hamiltonian::{
    build_h2, build_ising, build_lih, prepare_initial, InitialState, PauliHamiltonian, ProductAngle,
};
use crate::pite::{run_generalized_with, run_pite_with, spectrum_if_feasible, RunConfig, RunTrace, Schedule};

/// Which Hamiltonian to simulate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelSpec {
    H2 { r: f64 },
    Lih,
    Ising { n: usize, j: f64, g: f64, h: f64 },
    File { path: PathBuf },
}

impl ModelSpec {
    pub fn build(&self) -> Result<PauliHamiltonian> {
        match self {
            ModelSpec::H2 { r } => build_h2(*r),
            ModelSpec::Lih => Ok(build_lih()),
            ModelSpec::Ising { n, j, g, h } => build_ising(*n, *j, *g, *h),
            ModelSpec::File { path } => PauliHamiltonian::parse(&fs::read_to_string(path)?),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::H2 { .. } => "h2",
            ModelSpec::Lih => "lih",
            ModelSpec::Ising { .. } => "ising",
            ModelSpec::File { .. } => "file",
        }
    }

    /// The `--init` value used when none is given.
    pub fn default_init(&self) -> &'static str {
        match self {
            ModelSpec::Lih => "superposition",
            ModelSpec::Ising { .. } => "product",
            _ => "hf",
        }
    }
}

/// Resolves an `--init` value: `hf`, `superposition`, `product`,
/// `product:PHI` or a bit string with qubit 0 first.
pub fn resolve_init(model: &ModelSpec, choice: &str, n: usize) -> Result<InitialState> {
    let unsupported = || {
        PiteError::InvalidArgument(format!(
            "initial state \"{choice}\" is not defined for model {}",
            model.name()
        ))
    };
    match choice {
        "hf" => Ok(match model {
            ModelSpec::Lih => InitialState::lih_hartree_fock(),
            _ => InitialState::Basis("0".repeat(n)),
        }),
        "superposition" => match model {
            ModelSpec::Lih => Ok(InitialState::lih_superposition()),
            _ => Err(unsupported()),
        },
        "product" => match model {
            ModelSpec::Ising { j, g, h, .. } => Ok(InitialState::Product(ProductAngle::IsingOptimal {
                j: *j,
                g: *g,
                h: *h,
            })),
            _ => Err(unsupported()),
        },
        other => {
            if let Some(phi) = other.strip_prefix("product:") {
                let phi: f64 = phi
                    .parse()
                    .map_err(|_| PiteError::InvalidArgument(format!("invalid product angle \"{phi}\"")))?;
                return Ok(InitialState::Product(ProductAngle::Fixed(phi)));
            }
            if !other.is_empty() && other.chars().all(|c| c == '0' || c == '1') {
                return Ok(InitialState::Basis(other.to_string()));
            }
            Err(PiteError::InvalidArgument(format!(
                "unknown initial state \"{other}\" (expected hf, superposition, product, product:PHI or a bit string)"
            )))
        }
    }
}

/// Resolves a `--grouping` value: `pauli`, `ising-local`, `lih` or a GroupSpec file.
pub fn resolve_grouping(model: &ModelSpec, h: &PauliHamiltonian, choice: &str) -> Result<Option<GroupedHamiltonian>> {
    let spec = match (choice, model) {
        ("pauli", _) => return Ok(None),
        ("ising-local", ModelSpec::Ising { n, j, g, h: hz }) => ising_local_grouping(*n, *j, *g, *hz)?.0,
        ("ising-local", _) => {
            return Err(PiteError::InvalidGrouping(
                "ising-local grouping needs the ising model".into(),
            ))
        }
        ("lih", ModelSpec::Lih) => GroupSpec::lih(),
        ("lih", _) => return Err(PiteError::InvalidGrouping("lih grouping needs the lih model".into())),
        (path, _) => GroupSpec::parse(&fs::read_to_string(path)?)?,
    };
    GroupedHamiltonian::new(h, spec).map(Some)
}

/// A model with its initial state, optional grouping and spectrum, ready to run.
pub struct Prepared {
    pub hamiltonian: PauliHamiltonian,
    pub grouped: Option<GroupedHamiltonian>,
    pub init: Vec<Complex64>,
    pub spectrum: Option<SpectrumInfo>,
}

impl Prepared {
    pub fn new(model: &ModelSpec, init: &str, grouping: &str) -> Result<Self> {
        Self::build(model, init, grouping, None)
    }

    /// [`Prepared::new`], rejecting `config` before the diagonalization.
    pub fn for_config(model: &ModelSpec, init: &str, grouping: &str, config: &RunConfig) -> Result<Self> {
        Self::build(model, init, grouping, Some(config))
    }

    fn build(model: &ModelSpec, init: &str, grouping: &str, config: Option<&RunConfig>) -> Result<Self> {
        let hamiltonian = model.build()?;
        let n = hamiltonian.n_qubits();
        if let Some(c) = config {
            c.check_backend(n)?;
        }
        let state = resolve_init(model, init, n)?;
        let init = prepare_initial(&state, n)?;
        let grouped = resolve_grouping(model, &hamiltonian, grouping)?;
        let spectrum = spectrum_if_feasible(&hamiltonian, &init)?;
        Ok(Prepared {
            hamiltonian,
            grouped,
            init,
            spectrum,
        })
    }

    pub fn run(&self, schedule: &Schedule, config: &RunConfig) -> Result<RunTrace> {
        match &self.grouped {
            Some(gh) => run_generalized_with(gh, self.spectrum.as_ref(), &self.init, schedule, config),
            None => run_pite_with(&self.hamiltonian, self.spectrum.as_ref(), &self.init, schedule, config),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_choices() {
        let lih = ModelSpec::Lih;
        assert_eq!(resolve_init(&lih, "hf", 6).unwrap(), InitialState::lih_hartree_fock());
        assert!(resolve_init(&ModelSpec::H2 { r: 0.75 }, "superposition", 2).is_err());
        assert_eq!(
            resolve_init(&ModelSpec::H2 { r: 0.75 }, "01", 2).unwrap(),
            InitialState::Basis("01".into())
        );
        assert_eq!(
            resolve_init(&lih, "product:0.5", 6).unwrap(),
            InitialState::Product(ProductAngle::Fixed(0.5))
        );
        assert!(resolve_init(&lih, "abc", 6).is_err());
    }

    #[test]
    fn grouping_choices() {
        let m = ModelSpec::H2 { r: 0.75 };
        let h = m.build().unwrap();
        assert!(resolve_grouping(&m, &h, "pauli").unwrap().is_none());
        assert!(resolve_grouping(&m, &h, "ising-local").is_err());
        let ising = ModelSpec::Ising {
            n: 4,
            j: 1.0,
            g: 1.2,
            h: 0.3,
        };
        let g = resolve_grouping(&ising, &ising.build().unwrap(), "ising-local")
            .unwrap()
            .unwrap();
        assert_eq!(g.blocks.len(), 4);
    }
}
