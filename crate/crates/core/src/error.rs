use thiserror::Error;

/// Errors produced anywhere in the simulator.
#[derive(Debug, Error)]
pub enum PiteError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid hamiltonian: {0}")]
    InvalidHamiltonian(String),

    #[error("no tabulated H2 coefficients for R = {r} Å (available: {available})")]
    UntabulatedDistance { r: f64, available: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("qubit {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("evolution annihilated: ancilla |0> probability {prob0:e} below threshold")]
    Annihilated { prob0: f64 },

    #[error("restart budget of {budget} exhausted")]
    BudgetExhausted { budget: usize },

    #[error("{n_qubits} qubits exceeds the {limit}-qubit limit for {what}")]
    DimensionTooLarge {
        what: &'static str,
        n_qubits: usize,
        limit: usize,
    },

    #[error("invalid grouping: {0}")]
    InvalidGrouping(String),

    #[error("block support of {size} qubits exceeds the {limit}-qubit limit")]
    SupportTooLarge { size: usize, limit: usize },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("vacuous bound: {0}")]
    Vacuous(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, PiteError>;
