//! Gate-level circuits for one PITE step.
//!
//! Work qubits are `0..n_work`; the ancilla, when present, is qubit `n_work`.

mod gate;
mod synthesis;

use std::fmt::Write as _;

pub use gate::{ry_matrix, Gate, GateKind, Mat2};
pub use synthesis::{
    build_grouped_step, build_ising_block_gates, build_pauli_step, ising_block_angles, ising_block_matrix,
    synthesize_uk, theta_for_coeff, theta_for_gap, IsingBlockAngles, UkSynthesis,
};

use crate::error::{PiteError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_work: usize,
    has_ancilla: bool,
    gates: Vec<Gate>,
    measure_point: Option<usize>,
}

impl Circuit {
    pub fn new(n_work: usize, has_ancilla: bool) -> Self {
        Circuit {
            n_work,
            has_ancilla,
            gates: Vec::new(),
            measure_point: None,
        }
    }

    pub fn n_work(&self) -> usize {
        self.n_work
    }

    pub fn has_ancilla(&self) -> bool {
        self.has_ancilla
    }

    pub fn ancilla(&self) -> Option<usize> {
        self.has_ancilla.then_some(self.n_work)
    }

    pub fn n_total(&self) -> usize {
        self.n_work + usize::from(self.has_ancilla)
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Index of the first gate after the ancilla measurement.
    pub fn measure_point(&self) -> Option<usize> {
        self.measure_point
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_total())?;
        if self.measure_point.is_some() {
            if let Some(a) = self.ancilla() {
                if gate.touches(a) {
                    return Err(PiteError::InvalidCircuit(format!(
                        "{} touches the ancilla after its measurement",
                        gate.kind().label()
                    )));
                }
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.push(g))
    }

    /// Marks the ancilla measurement at the current end of the gate list.
    pub fn mark_measurement(&mut self) -> Result<()> {
        if !self.has_ancilla {
            return Err(PiteError::InvalidCircuit("no ancilla to measure".into()));
        }
        if self.measure_point.is_some() {
            return Err(PiteError::InvalidCircuit("measurement already marked".into()));
        }
        self.measure_point = Some(self.gates.len());
        Ok(())
    }

    pub fn before_measurement(&self) -> &[Gate] {
        &self.gates[..self.measure_point.unwrap_or(self.gates.len())]
    }

    pub fn after_measurement(&self) -> &[Gate] {
        &self.gates[self.measure_point.unwrap_or(self.gates.len())..]
    }

    /// Adjoint circuit; only defined for measurement-free circuits.
    pub fn inverse(&self) -> Result<Circuit> {
        if self.measure_point.is_some() {
            return Err(PiteError::InvalidCircuit(
                "cannot invert a circuit containing a measurement".into(),
            ));
        }
        Ok(Circuit {
            n_work: self.n_work,
            has_ancilla: self.has_ancilla,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            measure_point: None,
        })
    }

    /// Places this circuit on a larger register: work qubit `q` goes to
    /// `work_map[q]`, the ancilla stays the highest qubit.
    pub fn embed(&self, n_work: usize, work_map: &[usize]) -> Result<Circuit> {
        if work_map.len() != self.n_work || work_map.iter().any(|&q| q >= n_work) {
            return Err(PiteError::InvalidArgument(format!(
                "work map {work_map:?} does not fit {} -> {n_work} qubits",
                self.n_work
            )));
        }
        let mut map = work_map.to_vec();
        if self.has_ancilla {
            map.push(n_work);
        }
        let mut out = Circuit::new(n_work, self.has_ancilla);
        for (i, g) in self.gates.iter().enumerate() {
            if Some(i) == self.measure_point {
                out.mark_measurement()?;
            }
            out.push(g.remapped(&map))?;
        }
        if self.measure_point == Some(self.gates.len()) {
            out.mark_measurement()?;
        }
        Ok(out)
    }

    pub fn gate_counts(&self) -> GateCounts {
        gate_count(self)
    }

    /// Debug dump, one gate per line; the measurement shows as `MEASURE <ancilla>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, g) in self.gates.iter().enumerate() {
            if Some(i) == self.measure_point {
                let _ = writeln!(out, "MEASURE {}", self.n_work);
            }
            let _ = writeln!(out, "{}", g.dump_line());
        }
        if self.measure_point == Some(self.gates.len()) {
            let _ = writeln!(out, "MEASURE {}", self.n_work);
        }
        out
    }
}

/// Per-kind gate tally.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub hadamard: usize,
    pub phase_s: usize,
    pub phase_sdg: usize,
    pub pauli_x: usize,
    pub cnot: usize,
    pub ry: usize,
    pub controlled_ry: usize,
    pub conditional_ry: usize,
    pub dense_block: usize,
}

impl GateCounts {
    pub fn single_qubit(&self) -> usize {
        self.hadamard + self.phase_s + self.phase_sdg + self.pauli_x + self.ry
    }

    pub fn total(&self) -> usize {
        self.single_qubit() + self.cnot + self.controlled_ry + self.conditional_ry + self.dense_block
    }

    pub fn add(&mut self, other: &GateCounts) {
        self.hadamard += other.hadamard;
        self.phase_s += other.phase_s;
        self.phase_sdg += other.phase_sdg;
        self.pauli_x += other.pauli_x;
        self.cnot += other.cnot;
        self.ry += other.ry;
        self.controlled_ry += other.controlled_ry;
        self.conditional_ry += other.conditional_ry;
        self.dense_block += other.dense_block;
    }
}

pub fn gate_count(circuit: &Circuit) -> GateCounts {
    let mut c = GateCounts::default();
    for g in circuit.gates() {
        match g.kind() {
            GateKind::Hadamard => c.hadamard += 1,
            GateKind::PhaseS => c.phase_s += 1,
            GateKind::PhaseSdg => c.phase_sdg += 1,
            GateKind::PauliX => c.pauli_x += 1,
            GateKind::Cnot => c.cnot += 1,
            GateKind::Ry => c.ry += 1,
            GateKind::ControlledRy => c.controlled_ry += 1,
            GateKind::ConditionalRy => c.conditional_ry += 1,
            GateKind::DenseBlock => c.dense_block += 1,
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_counts() {
        assert_eq!(Circuit::new(3, true).gate_counts(), GateCounts::default());
        assert_eq!(GateCounts::default().total(), 0);
    }

    #[test]
    fn ancilla_locked_after_measurement() {
        let mut c = Circuit::new(1, true);
        c.push(Gate::ControlledRy {
            angle: 0.3,
            control: 0,
            target: 1,
        })
        .unwrap();
        c.mark_measurement().unwrap();
        assert!(c.push(Gate::PauliX(1)).is_err());
        c.push(Gate::PauliX(0)).unwrap();
        assert_eq!(c.before_measurement().len(), 1);
        assert_eq!(c.after_measurement().len(), 1);
        assert!(c.inverse().is_err());
    }

    #[test]
    fn embed_moves_ancilla() {
        let mut c = Circuit::new(2, true);
        c.push(Gate::Cnot { control: 1, target: 0 }).unwrap();
        c.push(Gate::ControlledRy {
            angle: 0.3,
            control: 0,
            target: 2,
        })
        .unwrap();
        c.mark_measurement().unwrap();
        let e = c.embed(5, &[3, 4]).unwrap();
        assert_eq!(e.gates()[0], Gate::Cnot { control: 4, target: 3 });
        assert_eq!(
            e.gates()[1],
            Gate::ControlledRy {
                angle: 0.3,
                control: 3,
                target: 5
            }
        );
        assert_eq!(e.measure_point(), Some(2));
        assert!(e.dump().ends_with("MEASURE 5\n"));
    }
}
