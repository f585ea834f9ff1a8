use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{PiteError, Result};

/// Rotation angle of the single-qubit factor `cos(φ/2)|0> + sin(φ/2)|1>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ProductAngle {
    Fixed(f64),
    /// Angle minimizing the product-state energy of the Ising chain.
    IsingOptimal {
        j: f64,
        g: f64,
        h: f64,
    },
}

const LIH_HF: &str = "000011";
const LIH_EXCITED: &str = "110000";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum InitialState {
    /// Computational basis state; character `q` of the string is qubit `q`.
    Basis(String),
    /// Weighted sum of basis states, normalized on preparation.
    Superposition(Vec<(f64, String)>),
    /// The same single-qubit state on every qubit.
    Product(ProductAngle),
}

impl InitialState {
    /// LiH Hartree-Fock state. In ket notation `|110000>` lists qubit 6
    /// first, so the occupied qubits are the two highest: string `"000011"`.
    pub fn lih_hartree_fock() -> Self {
        InitialState::Basis(LIH_HF.into())
    }

    /// `√0.99 |110000> + 0.1 |000011>` in ket notation (qubit 6 leftmost).
    pub fn lih_superposition() -> Self {
        InitialState::Superposition(vec![(0.99f64.sqrt(), LIH_HF.into()), (0.1, LIH_EXCITED.into())])
    }
}

fn basis_index(bits: &str, n: usize) -> Result<usize> {
    if bits.len() != n {
        return Err(PiteError::InvalidArgument(format!(
            "basis string \"{bits}\" has length {}, expected {n}",
            bits.len()
        )));
    }
    bits.chars().enumerate().try_fold(0usize, |acc, (q, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc | (1 << q)),
        _ => Err(PiteError::InvalidArgument(format!(
            "invalid character '{c}' in basis string \"{bits}\""
        ))),
    })
}

/// Unit-norm state vector on `n` qubits.
pub fn prepare_initial(spec: &InitialState, n: usize) -> Result<Vec<Complex64>> {
    let dim = 1usize << n;
    let mut psi = vec![Complex64::new(0.0, 0.0); dim];
    match spec {
        InitialState::Basis(bits) => {
            psi[basis_index(bits, n)?] = Complex64::new(1.0, 0.0);
        }
        InitialState::Superposition(parts) => {
            for (w, bits) in parts {
                if !w.is_finite() {
                    return Err(PiteError::InvalidArgument(format!("non-finite weight {w}")));
                }
                psi[basis_index(bits, n)?] += Complex64::new(*w, 0.0);
            }
            let norm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if !(norm > 1e-300) {
                return Err(PiteError::InvalidArgument(
                    "superposition weights are not normalizable".into(),
                ));
            }
            psi.iter_mut().for_each(|a| *a /= norm);
        }
        InitialState::Product(angle) => {
            let phi = match *angle {
                ProductAngle::Fixed(phi) => phi,
                ProductAngle::IsingOptimal { j, g, h } => ising_optimal_phi(j, g, h),
            };
            let (a0, a1) = ((phi / 2.0).cos(), (phi / 2.0).sin());
            for (b, amp) in psi.iter_mut().enumerate() {
                let ones = b.count_ones() as i32;
                *amp = Complex64::new(a1.powi(ones) * a0.powi(n as i32 - ones), 0.0);
            }
        }
    }
    Ok(psi)
}

/// Per-site product-state energy `-J (cos²φ + g sin φ + h cos φ)`.
fn product_energy_per_site(phi: f64, j: f64, g: f64, h: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    -j * (c * c + g * s + h * c)
}

/// Grid scan at 1e-3 resolution followed by golden-section refinement to 1e-8.
///
/// The scan covers `[-π, π]` so negative transverse fields are handled too.
pub fn ising_optimal_phi(j: f64, g: f64, h: f64) -> f64 {
    let e = |phi: f64| product_energy_per_site(phi, j, g, h);
    let step = 1e-3;
    let n_grid = (2.0 * std::f64::consts::PI / step).ceil() as usize;
    let (mut best, mut best_e) = (0.0, e(0.0));
    for i in 0..=n_grid {
        let phi = -std::f64::consts::PI + i as f64 * step;
        let v = e(phi);
        if v < best_e {
            best = phi;
            best_e = v;
        }
    }
    let inv_golden = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best - step, best + step);
    while hi - lo > 1e-8 {
        let m1 = hi - inv_golden * (hi - lo);
        let m2 = lo + inv_golden * (hi - lo);
        if e(m1) <= e(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let refined = 0.5 * (lo + hi);
    if e(refined) <= best_e {
        refined
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::build_ising;

    fn norm(psi: &[Complex64]) -> f64 {
        psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn basis_state() {
        let psi = prepare_initial(&InitialState::Basis("00".into()), 2).unwrap();
        assert_eq!(psi[0], Complex64::new(1.0, 0.0));
        assert!(psi[1..].iter().all(|a| a.norm() == 0.0));
        let psi = prepare_initial(&InitialState::Basis("01".into()), 2).unwrap();
        assert_eq!(psi[2], Complex64::new(1.0, 0.0));
        assert!(prepare_initial(&InitialState::Basis("012".into()), 3).is_err());
        assert!(prepare_initial(&InitialState::Basis("01".into()), 3).is_err());
    }

    #[test]
    fn lih_superposition_amplitudes() {
        let psi = prepare_initial(&InitialState::lih_superposition(), 6).unwrap();
        let nz: Vec<usize> = (0..64).filter(|&b| psi[b].norm() > 0.0).collect();
        assert_eq!(nz, vec![0b000011, 0b110000]);
        assert!((psi[0b110000].re - 0.99f64.sqrt()).abs() < 1e-12);
        assert!((psi[0b000011].re - 0.1).abs() < 1e-12);
        assert!((norm(&psi) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lih_hartree_fock_is_lowest_basis_state() {
        let h = crate::hamiltonian::build_lih();
        let hf = prepare_initial(&InitialState::lih_hartree_fock(), 6).unwrap();
        let e_hf = h.expectation(&hf);
        for b in 0..64 {
            let mut v = vec![Complex64::new(0.0, 0.0); 64];
            v[b] = Complex64::new(1.0, 0.0);
            assert!(h.expectation(&v) >= e_hf - 1e-12);
        }
    }

    #[test]
    fn superposition_must_be_normalizable() {
        let s = InitialState::Superposition(vec![(1.0, "01".into()), (-1.0, "01".into())]);
        assert!(prepare_initial(&s, 2).is_err());
    }

    /// Independent brute-force scan of the closed-form energy on a 1e-6 grid.
    fn scan_oracle(g: f64, h: f64) -> f64 {
        let n = 3_141_593;
        (0..=n)
            .map(|i| i as f64 * 1e-6)
            .min_by(|a, b| {
                let ea = -(a.cos().powi(2) + g * a.sin() + h * a.cos());
                let eb = -(b.cos().powi(2) + g * b.sin() + h * b.cos());
                ea.partial_cmp(&eb).unwrap()
            })
            .unwrap()
    }

    #[test]
    fn ising_phi_matches_scan() {
        let phi = ising_optimal_phi(1.0, 1.2, 0.3);
        // frozen from scan_oracle(1.2, 0.3)
        assert!((phi - 0.536_186).abs() < 2e-6, "{phi}");
        assert!((phi - scan_oracle(1.2, 0.3)).abs() < 2e-6);
    }

    #[test]
    fn product_state_energy_matches_closed_form() {
        let (j, g, h) = (1.0, 1.2, 0.3);
        let spec = InitialState::Product(ProductAngle::IsingOptimal { j, g, h });
        let psi = prepare_initial(&spec, 6).unwrap();
        assert!((norm(&psi) - 1.0).abs() < 1e-12);
        let phi = ising_optimal_phi(j, g, h);
        let ham = build_ising(6, j, g, h).unwrap();
        let closed = 6.0 * product_energy_per_site(phi, j, g, h);
        assert!((ham.expectation(&psi) - closed).abs() < 1e-12);
    }
}
