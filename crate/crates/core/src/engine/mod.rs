//! Statevector and density-matrix execution of step circuits, ancilla
//! measurement and the per-qubit relaxation/dephasing channel.
//!
//! The ancilla is always the highest qubit of the register it is measured in.

mod density;
mod kernels;
mod measure;
mod noise;
mod oracle;
mod statevector;
mod step;

pub use density::{DensityMatrix, MAX_DENSITY_QUBITS};
pub use measure::{MeasureMode, MeasureOutcome, MeasureResult, ANNIHILATION_THRESHOLD};
pub use noise::NoiseModel;
pub use oracle::{
    dense_step_oracle, distance_up_to_phase, gates_unitary, matrix_distance_up_to_phase, postselected_operator,
    MAX_ORACLE_QUBITS,
};
pub use statevector::StateVector;
pub use step::{run_step_density, run_step_density_generic, run_step_statevector, run_step_trajectory, StepOutcome};
