use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::BTreeMap;

use super::{Circuit, Gate};
use crate::error::{PiteError, Result};
use crate::grouping::{GroupedBlock, MAX_BLOCK_SUPPORT};
use crate::hamiltonian::{PauliAxis, PauliTerm};

/// Basis change `U_k` folding a Pauli term onto its pivot qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct UkSynthesis {
    pub circuit: Circuit,
    pub pivot: usize,
    pub gate_count: usize,
}

/// Builds `U_k = V3 V2 V1` with `U_k (c P) U_k† = -|c| Z_pivot`.
///
/// `V1` rotates X and Y factors to Z (`H`, and `H·S†`), `V2` folds every Z onto
/// the pivot with CNOTs controlled by the other qubits, `V3` is an X on the
/// pivot when `c > 0`. The pivot is the lowest qubit with a non-identity axis.
pub fn synthesize_uk(term: &PauliTerm) -> Result<UkSynthesis> {
    let support = term.support();
    let pivot = *support
        .first()
        .ok_or_else(|| PiteError::InvalidArgument("all-identity term".into()))?;
    let mut circuit = Circuit::new(term.n_qubits(), false);
    for (q, axis) in term.axes().iter().enumerate() {
        match axis {
            PauliAxis::X => circuit.push(Gate::Hadamard(q))?,
            PauliAxis::Y => {
                circuit.push(Gate::PhaseSdg(q))?;
                circuit.push(Gate::Hadamard(q))?;
            }
            _ => {}
        }
    }
    for &q in &support[1..] {
        circuit.push(Gate::Cnot {
            control: q,
            target: pivot,
        })?;
    }
    if term.coeff() > 0.0 {
        circuit.push(Gate::PauliX(pivot))?;
    }
    let gate_count = circuit.len();
    Ok(UkSynthesis {
        circuit,
        pivot,
        gate_count,
    })
}

/// `θ = 2 arccos(e^{-2|c|Δt})`.
pub fn theta_for_coeff(coeff: f64, dt: f64) -> f64 {
    theta_for_gap(2.0 * coeff.abs(), dt)
}

/// `θ = 2 arccos(e^{-ωΔt})`, the rotation that damps an excitation `ω` by `e^{-ωΔt}`.
pub fn theta_for_gap(omega: f64, dt: f64) -> f64 {
    2.0 * (-omega * dt).exp().min(1.0).acos()
}

fn check_dt(dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(PiteError::InvalidArgument(format!(
            "imaginary-time step must be positive, got {dt}"
        )))
    }
}

/// `U_k`, controlled-Ry from the pivot onto the ancilla, measurement, `U_k†`.
pub fn build_pauli_step(term: &PauliTerm, dt: f64) -> Result<Circuit> {
    check_dt(dt)?;
    let uk = synthesize_uk(term)?;
    let n = term.n_qubits();
    let mut c = Circuit::new(n, true);
    c.extend(uk.circuit.gates().iter().cloned())?;
    c.push(Gate::ControlledRy {
        angle: theta_for_coeff(term.coeff(), dt),
        control: uk.pivot,
        target: n,
    })?;
    c.mark_measurement()?;
    c.extend(uk.circuit.inverse()?.gates().iter().cloned())?;
    Ok(c)
}

/// Generalized step for a grouped block: rotate the block eigenbasis onto the
/// computational basis, damp each basis state `i` by `e^{-ω_i Δt}` through a
/// register-conditioned Ry on the ancilla, measure, rotate back.
pub fn build_grouped_step(block: &GroupedBlock, n_work: usize, dt: f64) -> Result<Circuit> {
    check_dt(dt)?;
    let k = block.support.len();
    if k > MAX_BLOCK_SUPPORT {
        return Err(PiteError::SupportTooLarge {
            size: k,
            limit: MAX_BLOCK_SUPPORT,
        });
    }
    let mut c = Circuit::new(n_work, true);
    let to_basis = block.eigenvectors.adjoint();
    c.push(Gate::DenseBlock {
        qubits: block.support.clone(),
        matrix: to_basis,
    })?;
    let angles: BTreeMap<usize, f64> = block
        .omegas
        .iter()
        .enumerate()
        .map(|(i, &w)| (i, theta_for_gap(w, dt)))
        .filter(|(_, a)| *a != 0.0)
        .collect();
    if !angles.is_empty() {
        c.push(Gate::ConditionalRy {
            controls: block.support.clone(),
            angles,
            target: n_work,
        })?;
    }
    c.mark_measurement()?;
    c.push(Gate::DenseBlock {
        qubits: block.support.clone(),
        matrix: block.eigenvectors.clone(),
    })?;
    Ok(c)
}

/// Closed-form eigensystem data of `-(Z_a Z_b + g X_a + h Z_a)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsingBlockAngles {
    /// `arccos((1-h)/√(g²+(h-1)²))`
    pub phi1: f64,
    /// `arccos((-1-h)/√(g²+(h+1)²))`
    pub phi2: f64,
    /// `[-r₊, -r₋, r₋, r₊]` with `r± = √(g²+(h±1)²)`.
    pub lambdas: [f64; 4],
    /// Ground-state rotation of qubit `a` in the `b = |0>` sector.
    pub rot_b0: f64,
    /// Ground-state rotation of qubit `a` in the `b = |1>` sector.
    pub rot_b1: f64,
}

pub fn ising_block_angles(g: f64, h: f64) -> IsingBlockAngles {
    let r_plus = g.hypot(h + 1.0);
    let r_minus = g.hypot(h - 1.0);
    let safe_acos = |num: f64, den: f64| {
        if den == 0.0 {
            0.0
        } else {
            (num / den).clamp(-1.0, 1.0).acos()
        }
    };
    IsingBlockAngles {
        phi1: safe_acos(1.0 - h, r_minus),
        phi2: safe_acos(-1.0 - h, r_plus),
        lambdas: [-r_plus, -r_minus, r_minus, r_plus],
        // For g >= 0 these equal π - phi2 and π - phi1.
        rot_b0: g.atan2(1.0 + h),
        rot_b1: g.atan2(h - 1.0),
    }
}

/// Gate-level step for the two-site Ising block `-(Z_0 Z_1 + g X_0 + h Z_0)`
/// (J = 1) on work qubits 0, 1 with the ancilla on qubit 2.
///
/// `Z_1` is conserved, so in each sector of qubit 1 the block is a
/// single-qubit field on qubit 0 diagonalized by an Ry. The sector-dependent
/// rotation is a fixed Ry plus a CNOT-conjugated half-angle pair.
pub fn build_ising_block_gates(g: f64, h: f64, dt: f64) -> Result<Circuit> {
    check_dt(dt)?;
    let ang = ising_block_angles(g, h);
    let delta = ang.rot_b1 - ang.rot_b0;
    let (a, b, anc) = (0usize, 1usize, 2usize);

    // V maps |a b> to the eigenvector with that label; U = V†.
    let v = [
        Gate::Ry {
            angle: ang.rot_b0 + delta / 2.0,
            qubit: a,
        },
        Gate::Cnot { control: b, target: a },
        Gate::Ry {
            angle: -delta / 2.0,
            qubit: a,
        },
        Gate::Cnot { control: b, target: a },
    ];
    let r_plus = -ang.lambdas[0];
    let r_minus = -ang.lambdas[1];
    // register value x = a + 2b
    let energies = [-r_plus, r_plus, -r_minus, r_minus];
    let lambda_min = energies.iter().cloned().fold(f64::INFINITY, f64::min);

    let mut c = Circuit::new(2, true);
    c.extend(v.iter().rev().map(Gate::inverse))?;
    for (x, e) in energies.iter().enumerate() {
        let omega = e - lambda_min;
        let theta = if omega.abs() <= 1e-12 {
            0.0
        } else {
            theta_for_gap(omega, dt)
        };
        if theta != 0.0 {
            c.push(Gate::ConditionalRy {
                controls: vec![a, b],
                angles: [(x, theta)].into_iter().collect(),
                target: anc,
            })?;
        }
    }
    c.mark_measurement()?;
    c.extend(v)?;
    Ok(c)
}

/// Dense 4×4 matrix of `-(Z_0 Z_1 + g X_0 + h Z_0)` with local index `a + 2b`.
pub fn ising_block_matrix(g: f64, h: f64) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(4, 4);
    for x in 0..4usize {
        let za = if x & 1 == 0 { 1.0 } else { -1.0 };
        let zb = if x & 2 == 0 { 1.0 } else { -1.0 };
        m[(x, x)] = Complex64::new(-(za * zb + h * za), 0.0);
        m[(x ^ 1, x)] = Complex64::new(-g, 0.0);
    }
    m
}
