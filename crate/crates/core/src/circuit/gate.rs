use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{PiteError, Result};

/// 2×2 complex matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn ry_matrix(angle: f64) -> Mat2 {
    let (s, c) = (angle / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    Hadamard(usize),
    PhaseS(usize),
    PhaseSdg(usize),
    PauliX(usize),
    Cnot {
        control: usize,
        target: usize,
    },
    Ry {
        angle: f64,
        qubit: usize,
    },
    ControlledRy {
        angle: f64,
        control: usize,
        target: usize,
    },
    /// `Σ_x |x><x|_controls ⊗ Ry(angles[x])` with `x = Σ_i bit(controls[i]) << i`.
    /// Register values absent from the map get no rotation.
    ConditionalRy {
        controls: Vec<usize>,
        angles: BTreeMap<usize, f64>,
        target: usize,
    },
    /// Arbitrary unitary on `qubits`; local index bit `i` is `qubits[i]`.
    DenseBlock {
        qubits: Vec<usize>,
        matrix: DMatrix<Complex64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Hadamard,
    PhaseS,
    PhaseSdg,
    PauliX,
    Cnot,
    Ry,
    ControlledRy,
    ConditionalRy,
    DenseBlock,
}

impl GateKind {
    pub fn label(self) -> &'static str {
        match self {
            GateKind::Hadamard => "H",
            GateKind::PhaseS => "S",
            GateKind::PhaseSdg => "SDG",
            GateKind::PauliX => "X",
            GateKind::Cnot => "CNOT",
            GateKind::Ry => "RY",
            GateKind::ControlledRy => "CRY",
            GateKind::ConditionalRy => "CONDRY",
            GateKind::DenseBlock => "DENSE",
        }
    }
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Hadamard(_) => GateKind::Hadamard,
            Gate::PhaseS(_) => GateKind::PhaseS,
            Gate::PhaseSdg(_) => GateKind::PhaseSdg,
            Gate::PauliX(_) => GateKind::PauliX,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Ry { .. } => GateKind::Ry,
            Gate::ControlledRy { .. } => GateKind::ControlledRy,
            Gate::ConditionalRy { .. } => GateKind::ConditionalRy,
            Gate::DenseBlock { .. } => GateKind::DenseBlock,
        }
    }

    /// Every qubit the gate touches, controls first.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Hadamard(q) | Gate::PhaseS(q) | Gate::PhaseSdg(q) | Gate::PauliX(q) => vec![*q],
            Gate::Ry { qubit, .. } => vec![*qubit],
            Gate::Cnot { control, target } | Gate::ControlledRy { control, target, .. } => {
                vec![*control, *target]
            }
            Gate::ConditionalRy { controls, target, .. } => {
                let mut v = controls.clone();
                v.push(*target);
                v
            }
            Gate::DenseBlock { qubits, .. } => qubits.clone(),
        }
    }

    pub fn touches(&self, qubit: usize) -> bool {
        self.qubits().contains(&qubit)
    }

    /// The 2×2 matrix of an uncontrolled single-qubit gate.
    pub fn single_qubit_matrix(&self) -> Option<Mat2> {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Gate::Hadamard(_) => Some([[h, h], [h, -h]]),
            Gate::PhaseS(_) => Some([[ONE, ZERO], [ZERO, i]]),
            Gate::PhaseSdg(_) => Some([[ONE, ZERO], [ZERO, -i]]),
            Gate::PauliX(_) => Some([[ZERO, ONE], [ONE, ZERO]]),
            Gate::Ry { angle, .. } => Some(ry_matrix(*angle)),
            _ => None,
        }
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::PhaseS(q) => Gate::PhaseSdg(*q),
            Gate::PhaseSdg(q) => Gate::PhaseS(*q),
            Gate::Ry { angle, qubit } => Gate::Ry {
                angle: -angle,
                qubit: *qubit,
            },
            Gate::ControlledRy { angle, control, target } => Gate::ControlledRy {
                angle: -angle,
                control: *control,
                target: *target,
            },
            Gate::ConditionalRy {
                controls,
                angles,
                target,
            } => Gate::ConditionalRy {
                controls: controls.clone(),
                angles: angles.iter().map(|(k, a)| (*k, -a)).collect(),
                target: *target,
            },
            Gate::DenseBlock { qubits, matrix } => Gate::DenseBlock {
                qubits: qubits.clone(),
                matrix: matrix.adjoint(),
            },
            other => other.clone(),
        }
    }

    /// Relabels qubits through `map[old] = new`.
    pub fn remapped(&self, map: &[usize]) -> Gate {
        let m = |q: &usize| map[*q];
        match self {
            Gate::Hadamard(q) => Gate::Hadamard(m(q)),
            Gate::PhaseS(q) => Gate::PhaseS(m(q)),
            Gate::PhaseSdg(q) => Gate::PhaseSdg(m(q)),
            Gate::PauliX(q) => Gate::PauliX(m(q)),
            Gate::Cnot { control, target } => Gate::Cnot {
                control: m(control),
                target: m(target),
            },
            Gate::Ry { angle, qubit } => Gate::Ry {
                angle: *angle,
                qubit: m(qubit),
            },
            Gate::ControlledRy { angle, control, target } => Gate::ControlledRy {
                angle: *angle,
                control: m(control),
                target: m(target),
            },
            Gate::ConditionalRy {
                controls,
                angles,
                target,
            } => Gate::ConditionalRy {
                controls: controls.iter().map(m).collect(),
                angles: angles.clone(),
                target: m(target),
            },
            Gate::DenseBlock { qubits, matrix } => Gate::DenseBlock {
                qubits: qubits.iter().map(m).collect(),
                matrix: matrix.clone(),
            },
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= n_qubits {
                return Err(PiteError::QubitOutOfRange { index: q, n_qubits });
            }
        }
        for (i, a) in qs.iter().enumerate() {
            if qs[i + 1..].contains(a) {
                return Err(PiteError::InvalidGate(format!(
                    "{} repeats qubit {a}",
                    self.kind().label()
                )));
            }
        }
        let finite = |a: f64, what: &str| {
            if a.is_finite() {
                Ok(())
            } else {
                Err(PiteError::InvalidGate(format!("non-finite {what} angle")))
            }
        };
        match self {
            Gate::Ry { angle, .. } => finite(*angle, "RY")?,
            Gate::ControlledRy { angle, .. } => finite(*angle, "CRY")?,
            Gate::ConditionalRy { controls, angles, .. } => {
                if controls.is_empty() {
                    return Err(PiteError::InvalidGate("CONDRY without controls".into()));
                }
                let limit = 1usize << controls.len();
                for (&x, &a) in angles {
                    if x >= limit {
                        return Err(PiteError::InvalidGate(format!(
                            "CONDRY register value {x} out of range for {} controls",
                            controls.len()
                        )));
                    }
                    finite(a, "CONDRY")?;
                    if a == 0.0 {
                        return Err(PiteError::InvalidGate(format!("CONDRY entry {x} has zero rotation")));
                    }
                }
            }
            Gate::DenseBlock { qubits, matrix } => {
                let dim = 1usize << qubits.len();
                if matrix.nrows() != dim || matrix.ncols() != dim {
                    return Err(PiteError::InvalidGate(format!(
                        "DENSE matrix is {}x{}, expected {dim}x{dim}",
                        matrix.nrows(),
                        matrix.ncols()
                    )));
                }
                let defect = (matrix.adjoint() * matrix - DMatrix::identity(dim, dim)).norm();
                if defect > 1e-10 {
                    return Err(PiteError::InvalidGate(format!(
                        "DENSE matrix not unitary (defect {defect:e})"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// One line of the debug dump: `<kind> <qubits> [<angle>]`.
    pub fn dump_line(&self) -> String {
        let join = |qs: &[usize]| qs.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",");
        let label = self.kind().label();
        match self {
            Gate::Ry { angle, qubit } => format!("{label} {qubit} {angle}"),
            Gate::ControlledRy { angle, control, target } => format!("{label} {control},{target} {angle}"),
            Gate::ConditionalRy { angles, .. } => {
                let map = angles
                    .iter()
                    .map(|(x, a)| format!("{x}:{a}"))
                    .collect::<Vec<_>>()
                    .join(";");
                format!("{label} {} {map}", join(&self.qubits()))
            }
            Gate::DenseBlock { qubits, matrix } => {
                format!("{label} {} {}x{}", join(qubits), matrix.nrows(), matrix.ncols())
            }
            _ => format!("{label} {}", join(&self.qubits())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
        let mut out = [[ZERO; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        out
    }

    #[test]
    fn inverses_are_adjoints() {
        for g in [
            Gate::Hadamard(0),
            Gate::PhaseS(0),
            Gate::PhaseSdg(0),
            Gate::PauliX(0),
            Gate::Ry { angle: 0.37, qubit: 0 },
        ] {
            let p = mul(
                &g.single_qubit_matrix().unwrap(),
                &g.inverse().single_qubit_matrix().unwrap(),
            );
            assert!((p[0][0] - ONE).norm() < 1e-15 && (p[1][1] - ONE).norm() < 1e-15);
            assert!(p[0][1].norm() < 1e-15 && p[1][0].norm() < 1e-15);
        }
    }

    #[test]
    fn validation() {
        assert!(Gate::Cnot { control: 1, target: 1 }.validate(3).is_err());
        assert!(matches!(
            Gate::Hadamard(3).validate(3),
            Err(PiteError::QubitOutOfRange { index: 3, .. })
        ));
        let bad = Gate::DenseBlock {
            qubits: vec![0],
            matrix: DMatrix::from_element(2, 2, ONE),
        };
        assert!(bad.validate(1).is_err());
        let cond = Gate::ConditionalRy {
            controls: vec![0],
            angles: [(2usize, 0.5)].into_iter().collect(),
            target: 1,
        };
        assert!(cond.validate(2).is_err());
        let zero = Gate::ConditionalRy {
            controls: vec![0],
            angles: [(1usize, 0.0)].into_iter().collect(),
            target: 1,
        };
        assert!(zero.validate(2).is_err());
    }

    #[test]
    fn dump_lines() {
        assert_eq!(Gate::Cnot { control: 1, target: 0 }.dump_line(), "CNOT 1,0");
        assert_eq!(
            Gate::ControlledRy {
                angle: 0.5,
                control: 0,
                target: 2
            }
            .dump_line(),
            "CRY 0,2 0.5"
        );
        let d = Gate::DenseBlock {
            qubits: vec![0, 1],
            matrix: DMatrix::identity(4, 4),
        };
        assert_eq!(d.dump_line(), "DENSE 0,1 4x4");
    }
}
