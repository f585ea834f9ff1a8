use serde::{Deserialize, Serialize};

use crate::error::{PiteError, Result};

/// Trotter schedule: `n_steps` steps of size `dt`, first or second order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSchedule")]
pub struct Schedule {
    dt: f64,
    n_steps: usize,
    order: u8,
}

#[derive(Deserialize)]
struct RawSchedule {
    dt: f64,
    n_steps: usize,
    order: u8,
}

impl TryFrom<RawSchedule> for Schedule {
    type Error = PiteError;

    fn try_from(raw: RawSchedule) -> Result<Self> {
        Schedule::new(raw.dt, raw.n_steps, raw.order)
    }
}

/// One entry of a Trotter step: term (or block) index and whether it runs
/// for half a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SequenceEntry {
    pub index: usize,
    pub half: bool,
}

impl Schedule {
    pub fn new(dt: f64, n_steps: usize, order: u8) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(PiteError::InvalidArgument(format!("dt must be positive, got {dt}")));
        }
        if n_steps == 0 {
            return Err(PiteError::InvalidArgument("schedule needs at least one step".into()));
        }
        if order != 1 && order != 2 {
            return Err(PiteError::InvalidArgument(format!(
                "Trotter order must be 1 or 2, got {order}"
            )));
        }
        Ok(Schedule { dt, n_steps, order })
    }

    /// `L = β/Δt`, which must be an integer.
    pub fn from_beta(beta: f64, dt: f64, order: u8) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(PiteError::InvalidArgument(format!("beta must be positive, got {beta}")));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(PiteError::InvalidArgument(format!("dt must be positive, got {dt}")));
        }
        let steps = (beta / dt).round();
        if steps < 1.0 || (steps * dt - beta).abs() > 1e-9 * beta.max(1.0) {
            return Err(PiteError::InvalidArgument(format!(
                "beta {beta} is not a whole number of steps of size {dt}"
            )));
        }
        Schedule::new(dt, steps as usize, order)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn beta(&self) -> f64 {
        self.n_steps as f64 * self.dt
    }

    /// Cumulative imaginary time after `step` Trotter steps.
    pub fn beta_at(&self, step: usize) -> f64 {
        step as f64 * self.dt
    }

    /// Term order within one Trotter step over `m` terms. Order 2 is the
    /// palindrome `1, ..., m, m, ..., 1` with half steps.
    pub fn sequence(&self, m: usize) -> Vec<SequenceEntry> {
        match self.order {
            1 => (0..m).map(|index| SequenceEntry { index, half: false }).collect(),
            _ => (0..m)
                .chain((0..m).rev())
                .map(|index| SequenceEntry { index, half: true })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_beta_counts_steps() {
        let s = Schedule::from_beta(2.0, 0.05, 1).unwrap();
        assert_eq!(s.n_steps(), 40);
        assert!((s.beta() - 2.0).abs() < 1e-12);
        assert!(Schedule::from_beta(1.0, 0.3, 1).is_err());
        assert!(Schedule::from_beta(1.0, 0.1, 3).is_err());
        assert!(Schedule::new(0.0, 3, 1).is_err());
        assert!(Schedule::new(0.1, 0, 1).is_err());
    }

    #[test]
    fn second_order_is_palindrome() {
        let s = Schedule::new(0.1, 1, 2).unwrap();
        let seq: Vec<usize> = s.sequence(3).iter().map(|e| e.index).collect();
        assert_eq!(seq, vec![0, 1, 2, 2, 1, 0]);
        assert!(s.sequence(3).iter().all(|e| e.half));
        let first = Schedule::new(0.1, 1, 1).unwrap();
        assert_eq!(
            first.sequence(2),
            vec![
                SequenceEntry { index: 0, half: false },
                SequenceEntry { index: 1, half: false }
            ]
        );
    }

    #[test]
    fn serde_validates() {
        let s = Schedule::new(0.05, 4, 2).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<Schedule>(&text).unwrap(), s);
        assert!(serde_json::from_str::<Schedule>(r#"{"dt":0.1,"n_steps":2,"order":5}"#).is_err());
    }
}
