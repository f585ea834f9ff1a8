//! Executes one step circuit (gates, ancilla measurement, gates) on a work register.

use rand::{Rng, RngCore};

use super::kernels::gather;
use super::measure::{MeasureMode, MeasureOutcome, ANNIHILATION_THRESHOLD};
use super::{DensityMatrix, NoiseModel, StateVector};
use crate::circuit::{Circuit, Gate};
use crate::error::{PiteError, Result};

/// Work-register state after one step.
#[derive(Clone, Debug)]
pub struct StepOutcome<S> {
    pub prob0: f64,
    pub outcome: MeasureOutcome,
    pub state: S,
}

fn check_step(step: &Circuit, n_work: usize) -> Result<()> {
    if step.n_work() != n_work {
        return Err(PiteError::InvalidCircuit(format!(
            "step acts on {} work qubits, state has {n_work}",
            step.n_work()
        )));
    }
    if !step.has_ancilla() || step.measure_point().is_none() {
        return Err(PiteError::InvalidCircuit(
            "step circuit has no ancilla measurement".into(),
        ));
    }
    Ok(())
}

pub fn run_step_statevector(
    work: &StateVector,
    step: &Circuit,
    mode: MeasureMode,
    rng: &mut dyn RngCore,
) -> Result<StepOutcome<StateVector>> {
    run_step_trajectory(work, step, None, mode, rng)
}

/// Pure-state step; with a noise model, one Kraus branch is sampled on every
/// qubit (ancilla included) before the measurement.
pub fn run_step_trajectory(
    work: &StateVector,
    step: &Circuit,
    noise: Option<&NoiseModel>,
    mode: MeasureMode,
    rng: &mut dyn RngCore,
) -> Result<StepOutcome<StateVector>> {
    check_step(step, work.n_qubits())?;
    let mut full = work.with_ancilla();
    full.apply_gates(step.before_measurement())?;
    if let Some(model) = noise {
        for q in 0..full.n_qubits() {
            model.sample_branch(full.amplitudes_mut(), q, rng);
        }
    }
    let m = full.measure_ancilla(mode, rng)?;
    let mut state = m.state;
    if m.outcome.succeeded() {
        state.apply_gates(step.after_measurement())?;
    }
    Ok(StepOutcome {
        prob0: m.prob0,
        outcome: m.outcome,
        state,
    })
}

/// Mixed-state step. Uses the ancilla-free update when the ancilla is only
/// touched by Ry rotations conditioned on the work register, otherwise the
/// full `(n+1)`-qubit simulation.
pub fn run_step_density(
    work: &DensityMatrix,
    step: &Circuit,
    noise: Option<&NoiseModel>,
    mode: MeasureMode,
    rng: &mut dyn RngCore,
) -> Result<StepOutcome<DensityMatrix>> {
    check_step(step, work.n_qubits())?;
    match split_coupling(step) {
        Some(split) => run_step_density_fused(work, step, &split, noise, mode, rng),
        None => run_step_density_generic(work, step, noise, mode, rng),
    }
}

/// Reference path: append the ancilla, evolve all `n+1` qubits, measure.
pub fn run_step_density_generic(
    work: &DensityMatrix,
    step: &Circuit,
    noise: Option<&NoiseModel>,
    mode: MeasureMode,
    rng: &mut dyn RngCore,
) -> Result<StepOutcome<DensityMatrix>> {
    check_step(step, work.n_qubits())?;
    let mut full = work.with_ancilla()?;
    full.apply_gates(step.before_measurement())?;
    if let Some(model) = noise {
        full.apply_noise(model);
    }
    let m = full.measure_ancilla(mode, rng)?;
    let mut state = m.state;
    if m.outcome.succeeded() {
        state.apply_gates(step.after_measurement())?;
    }
    Ok(StepOutcome {
        prob0: m.prob0,
        outcome: m.outcome,
        state,
    })
}

/// Pre-measurement gates split into work-only gates followed by
/// ancilla rotations controlled by the work register.
pub(crate) struct CouplingSplit {
    pub work_gates: usize,
}

pub(crate) fn split_coupling(step: &Circuit) -> Option<CouplingSplit> {
    let anc = step.ancilla()?;
    let pre = step.before_measurement();
    let first = pre.iter().position(|g| g.touches(anc)).unwrap_or(pre.len());
    let coupling_ok = pre[first..].iter().all(|g| match g {
        Gate::ControlledRy { target, .. } => *target == anc,
        Gate::ConditionalRy { target, .. } => *target == anc,
        _ => false,
    });
    coupling_ok.then_some(CouplingSplit { work_gates: first })
}

/// Total ancilla rotation angle for each work basis state.
pub(crate) fn coupling_angles(gates: &[Gate], n_work: usize) -> Vec<f64> {
    let mut theta = vec![0.0; 1 << n_work];
    for g in gates {
        match g {
            Gate::ControlledRy { angle, control, .. } => {
                let cb = 1usize << control;
                theta
                    .iter_mut()
                    .enumerate()
                    .filter(|(x, _)| x & cb != 0)
                    .for_each(|(_, t)| *t += angle);
            }
            Gate::ConditionalRy { controls, angles, .. } => {
                for (x, t) in theta.iter_mut().enumerate() {
                    if let Some(a) = angles.get(&gather(x, controls)) {
                        *t += a;
                    }
                }
            }
            _ => unreachable!("split_coupling admits only ancilla rotations"),
        }
    }
    theta
}

fn run_step_density_fused(
    work: &DensityMatrix,
    step: &Circuit,
    split: &CouplingSplit,
    noise: Option<&NoiseModel>,
    mode: MeasureMode,
    rng: &mut dyn RngCore,
) -> Result<StepOutcome<DensityMatrix>> {
    let n = work.n_qubits();
    let pre = step.before_measurement();
    let mut rho = work.clone();
    rho.apply_gates(&pre[..split.work_gates])?;
    let theta = coupling_angles(&pre[split.work_gates..], n);
    let half: Vec<(f64, f64)> = theta.iter().map(|t| (t / 2.0).sin_cos()).collect();
    let decay = noise.map_or(0.0, NoiseModel::eps_r);
    let before = rho.trace();

    // <0|E_anc(Ry ⊗ ... )|0> on the ancilla, entry by entry
    let project = |rho: &DensityMatrix, outcome_one: bool| -> DensityMatrix {
        let mut out = rho.clone();
        let dim = 1usize << n;
        let data = out.data_mut();
        for r in 0..dim {
            let (sr, cr) = half[r];
            for c in 0..dim {
                let (sc, cc) = half[c];
                let w = if outcome_one {
                    (1.0 - decay) * sr * sc
                } else {
                    cr * cc + decay * sr * sc
                };
                data[(r << n) | c] *= w;
            }
        }
        if let Some(model) = noise {
            out.apply_noise(model);
        }
        out
    };

    let mut branch = project(&rho, false);
    let prob0 = branch.trace() / before;
    let outcome = match mode {
        MeasureMode::Postselect => {
            if prob0 < ANNIHILATION_THRESHOLD {
                return Err(PiteError::Annihilated { prob0 });
            }
            MeasureOutcome::Postselected
        }
        MeasureMode::Sample => {
            if rng.gen::<f64>() < prob0 {
                MeasureOutcome::Sampled0
            } else {
                branch = project(&rho, true);
                MeasureOutcome::Sampled1
            }
        }
    };
    branch.normalize()?;
    if outcome.succeeded() {
        branch.apply_gates(step.after_measurement())?;
    }
    Ok(StepOutcome {
        prob0,
        outcome,
        state: branch,
    })
}
