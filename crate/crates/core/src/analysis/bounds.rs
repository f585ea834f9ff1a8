use serde::{Deserialize, Serialize};

use super::SpectrumInfo;
use crate::error::{PiteError, Result};
use crate::hamiltonian::PauliHamiltonian;

fn check_s0(s0: f64) -> Result<()> {
    if s0 <= 0.0 || !s0.is_finite() {
        return Err(PiteError::Vacuous(format!(
            "initial ground-state overlap is {s0}; imaginary-time evolution cannot reach the ground state"
        )));
    }
    Ok(())
}

/// `F(β) >= s₀ / (s₀ + (1 - s₀) e^{-2βΩ₁})`.
pub fn fidelity_bound(s0: f64, gap1: f64, beta: f64) -> Result<f64> {
    check_s0(s0)?;
    if gap1 < 0.0 || beta < 0.0 {
        return Err(PiteError::InvalidArgument(format!(
            "gap {gap1} and beta {beta} must be non-negative"
        )));
    }
    let s0 = s0.min(1.0);
    Ok(s0 / (s0 + (1.0 - s0) * (-2.0 * beta * gap1).exp()))
}

/// Smallest β for which [`fidelity_bound`] reaches `1 - eps`.
pub fn beta_for_error(eps: f64, s0: f64, gap1: f64) -> Result<f64> {
    check_s0(s0)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(PiteError::InvalidArgument(format!("eps must lie in (0, 1), got {eps}")));
    }
    if eps >= 1.0 - s0 {
        return Ok(0.0);
    }
    if gap1 <= 0.0 {
        return Err(PiteError::Vacuous("zero gap: no finite β reaches the target".into()));
    }
    Ok(0.5 * ((1.0 - s0) / s0 * (1.0 - eps) / eps).ln() / gap1)
}

/// Rigorous lower bound `exp(-4β Σ|c_k|)`, identity offset excluded.
pub fn rlb(h: &PauliHamiltonian, beta: f64) -> f64 {
    rlb_from_sum(h.abs_coeff_sum(), beta)
}

pub fn rlb_from_sum(abs_coeff_sum: f64, beta: f64) -> f64 {
    (-4.0 * beta * abs_coeff_sum).exp()
}

/// `(1 - e^{-2βΩ₁}) / Ω₁`, with its `Ω₁ -> 0` limit `2β`.
fn saturating_ratio(gap1: f64, beta: f64) -> f64 {
    if gap1 <= 0.0 {
        2.0 * beta
    } else {
        -(-2.0 * beta * gap1).exp_m1() / gap1
    }
}

/// Approximate success probability
/// `exp[-2β(E_G + Σ|c_k|) - ((1-s₀)Ω_max/(s₀Ω₁))(1 - e^{-2βΩ₁})]`.
pub fn alb(h: &PauliHamiltonian, spectrum: &SpectrumInfo, beta: f64) -> Result<f64> {
    alb_generalized(-h.abs_coeff_sum(), spectrum, beta)
}

/// [`alb`] with `-Σ|c_k|` replaced by the sum of block ground energies.
pub fn alb_generalized(block_minima: f64, spectrum: &SpectrumInfo, beta: f64) -> Result<f64> {
    let s0 = spectrum.s0;
    check_s0(s0)?;
    let e_g = spectrum.e_ground_bare();
    let spread = (1.0 - s0).max(0.0) * spectrum.gap_max / s0 * saturating_ratio(spectrum.gap_1, beta);
    Ok((-2.0 * beta * (e_g - block_minima) - spread).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaExponents {
    pub kappa0: f64,
    pub kappa1: f64,
    /// The ground space is degenerate and `Ω₁` is the first positive gap.
    pub degenerate: bool,
}

/// `κ₀ = 2Σ|c_k|/Ω₁`, `κ₁ = (E_G + Σ|c_k|)/Ω₁`.
pub fn kappa_exponents(h: &PauliHamiltonian, spectrum: &SpectrumInfo) -> Result<KappaExponents> {
    if spectrum.gap_1 <= 0.0 {
        return Err(PiteError::Vacuous("spectrum has no positive gap".into()));
    }
    let sum = h.abs_coeff_sum();
    Ok(KappaExponents {
        kappa0: 2.0 * sum / spectrum.gap_1,
        kappa1: (spectrum.e_ground_bare() + sum) / spectrum.gap_1,
        degenerate: spectrum.degenerate,
    })
}
