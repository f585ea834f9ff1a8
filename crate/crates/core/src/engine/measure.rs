use serde::{Deserialize, Serialize};

/// Ancilla |0> probabilities below this make post-selection meaningless.
pub const ANNIHILATION_THRESHOLD: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureMode {
    /// Always keep the |0> branch.
    Postselect,
    /// Draw the outcome from the Born rule.
    Sample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureOutcome {
    Postselected,
    Sampled0,
    Sampled1,
}

impl MeasureOutcome {
    pub fn succeeded(self) -> bool {
        self != MeasureOutcome::Sampled1
    }
}

/// Result of measuring the ancilla; `state` is the normalized work register
/// conditioned on the outcome.
#[derive(Clone, Debug)]
pub struct MeasureResult<S> {
    pub prob0: f64,
    pub state: S,
    pub outcome: MeasureOutcome,
}
