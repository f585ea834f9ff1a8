//! Imaginary-time evolution driver: Trotter scheduling, per-term steps with
//! success-probability accounting, and whole-run restarts in sample mode.

mod restart;
mod schedule;
mod trace;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use restart::{restart_loop, Attempt, RestartOutcome};
pub use schedule::{Schedule, SequenceEntry};
pub use trace::{
    csv_row, read_csv, write_csv, write_json, RunStatus, RunTrace, TraceDocument, TraceRecord, CSV_HEADER,
};

use crate::analysis::{alb_generalized, diagonalize, rlb_from_sum, SpectrumInfo, MAX_DIAG_QUBITS};
use crate::circuit::{build_grouped_step, build_pauli_step, Circuit};
use crate::engine::{
    run_step_density, run_step_statevector, run_step_trajectory, DensityMatrix, MeasureMode, NoiseModel, StateVector,
    StepOutcome, MAX_DENSITY_QUBITS,
};
use crate::error::{PiteError, Result};
use crate::grouping::GroupedHamiltonian;
use crate::hamiltonian::PauliHamiltonian;

/// How the register is simulated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// Statevector when noiseless, density matrix when noisy.
    #[default]
    Auto,
    StateVector,
    DensityMatrix,
    /// Averages `count` pure-state runs with sampled Kraus branches.
    Trajectories {
        count: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub mode: MeasureMode,
    pub noise: Option<NoiseModel>,
    pub backend: Backend,
    pub seed: Option<u64>,
    /// Record observables every `cadence` Trotter steps (and after the last).
    pub cadence: usize,
    /// Sample mode: restarts allowed before giving up.
    pub restart_budget: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: MeasureMode::Postselect,
            noise: None,
            backend: Backend::Auto,
            seed: None,
            cadence: 1,
            restart_budget: 1000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Resolved {
    Pure,
    Mixed,
    Trajectories(usize),
}

impl RunConfig {
    pub fn postselect() -> Self {
        RunConfig::default()
    }

    pub fn sample(seed: u64) -> Self {
        RunConfig {
            mode: MeasureMode::Sample,
            seed: Some(seed),
            ..RunConfig::default()
        }
    }

    pub fn with_noise(mut self, noise: NoiseModel) -> Self {
        self.noise = Some(noise);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.cadence == 0 {
            return Err(PiteError::InvalidArgument(
                "observable cadence must be at least 1".into(),
            ));
        }
        if self.mode == MeasureMode::Sample && self.seed.is_none() {
            return Err(PiteError::InvalidArgument("sample mode requires a seed".into()));
        }
        match self.backend {
            Backend::StateVector if self.noise.is_some() => Err(PiteError::InvalidArgument(
                "noise needs the density-matrix or trajectory backend".into(),
            )),
            Backend::Trajectories { count: 0 } => {
                Err(PiteError::InvalidArgument("trajectory count must be at least 1".into()))
            }
            Backend::Trajectories { .. } if self.mode == MeasureMode::Sample => Err(PiteError::InvalidArgument(
                "trajectory runs support post-selection only".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Fails when no backend can run this configuration on `n_work` qubits.
    pub fn check_backend(&self, n_work: usize) -> Result<()> {
        self.validate()?;
        self.resolve(n_work).map(|_| ())
    }

    fn resolve(&self, n_work: usize) -> Result<Resolved> {
        let mixed = |n: usize| {
            if n + 1 > MAX_DENSITY_QUBITS {
                Err(PiteError::DimensionTooLarge {
                    what: "density-matrix simulation (use trajectories)",
                    n_qubits: n + 1,
                    limit: MAX_DENSITY_QUBITS,
                })
            } else {
                Ok(Resolved::Mixed)
            }
        };
        match self.backend {
            Backend::Auto if self.noise.is_some() => mixed(n_work),
            Backend::Auto | Backend::StateVector => Ok(Resolved::Pure),
            Backend::DensityMatrix => mixed(n_work),
            Backend::Trajectories { count } => Ok(Resolved::Trajectories(count)),
        }
    }
}

#[derive(Clone, Debug)]
enum Live {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl Live {
    fn step(
        &self,
        c: &Circuit,
        noise: Option<&NoiseModel>,
        mode: MeasureMode,
        rng: &mut ChaCha8Rng,
    ) -> Result<StepOutcome<Live>> {
        match self {
            Live::Pure(s) => {
                let o = run_step_statevector(s, c, mode, rng)?;
                Ok(StepOutcome {
                    prob0: o.prob0,
                    outcome: o.outcome,
                    state: Live::Pure(o.state),
                })
            }
            Live::Mixed(rho) => {
                let o = run_step_density(rho, c, noise, mode, rng)?;
                Ok(StepOutcome {
                    prob0: o.prob0,
                    outcome: o.outcome,
                    state: Live::Mixed(o.state),
                })
            }
        }
    }

    fn energy(&self, h: &PauliHamiltonian) -> Result<f64> {
        match self {
            Live::Pure(s) => s.expectation(h),
            Live::Mixed(rho) => rho.expectation(h),
        }
    }

    fn fidelity(&self, ground: Option<&[Vec<Complex64>]>) -> f64 {
        match (self, ground) {
            (Live::Pure(s), Some(g)) => s.subspace_fidelity(g),
            (Live::Mixed(rho), Some(g)) => rho.subspace_fidelity(g),
            _ => f64::NAN,
        }
    }
}

/// Everything a run needs besides the state: the step circuits and the
/// quantities reported per record.
struct Problem<'a> {
    h: &'a PauliHamiltonian,
    spectrum: Option<&'a SpectrumInfo>,
    ground: Option<Vec<Vec<Complex64>>>,
    /// `Σ|c_k|` of the Pauli terms.
    abs_sum: f64,
    /// `-Σ|c_k|`, or the sum of block ground energies when grouped.
    minima: f64,
    /// Circuits of one Trotter step in execution order.
    sequence: Vec<Circuit>,
}

impl Problem<'_> {
    fn record(&self, step: usize, beta: f64, energy: f64, fidelity: f64, p_cum: f64, restarts: usize) -> TraceRecord {
        let alb = self
            .spectrum
            .and_then(|s| alb_generalized(self.minima, s, beta).ok())
            .unwrap_or(f64::NAN);
        TraceRecord {
            step,
            beta,
            energy,
            fidelity,
            p_cum,
            rlb: rlb_from_sum(self.abs_sum, beta),
            alb,
            restarts,
        }
    }

    fn records_at(&self, schedule: &Schedule, cadence: usize) -> impl Iterator<Item = usize> + '_ {
        let last = schedule.n_steps();
        (1..=last).filter(move |s| s % cadence == 0 || *s == last)
    }
}

fn build_sequence<F>(m: usize, schedule: &Schedule, build: F) -> Result<Vec<Circuit>>
where
    F: Fn(usize, f64) -> Result<Circuit>,
{
    let dt = schedule.dt();
    let unique: Vec<Circuit> = (0..m)
        .map(|k| build(k, if schedule.order() == 1 { dt } else { dt / 2.0 }))
        .collect::<Result<_>>()?;
    Ok(schedule.sequence(m).iter().map(|e| unique[e.index].clone()).collect())
}

fn check_init(n: usize, init: &[Complex64]) -> Result<()> {
    if init.len() != 1 << n {
        return Err(PiteError::InvalidArgument(format!(
            "initial state has {} amplitudes, Hamiltonian acts on {n} qubits",
            init.len()
        )));
    }
    Ok(())
}

/// Exact spectrum and initial overlaps, when the register is small enough.
pub fn spectrum_if_feasible(h: &PauliHamiltonian, init: &[Complex64]) -> Result<Option<SpectrumInfo>> {
    if h.n_qubits() > MAX_DIAG_QUBITS {
        return Ok(None);
    }
    check_init(h.n_qubits(), init)?;
    diagonalize(h, init).map(Some)
}

/// Per-Pauli evolution of `init` under `h`.
pub fn run_pite(h: &PauliHamiltonian, init: &[Complex64], schedule: &Schedule, config: &RunConfig) -> Result<RunTrace> {
    let spectrum = spectrum_if_feasible(h, init)?;
    run_pite_with(h, spectrum.as_ref(), init, schedule, config)
}

/// [`run_pite`] with a precomputed spectrum (or none, disabling fidelity and ALB).
pub fn run_pite_with(
    h: &PauliHamiltonian,
    spectrum: Option<&SpectrumInfo>,
    init: &[Complex64],
    schedule: &Schedule,
    config: &RunConfig,
) -> Result<RunTrace> {
    let terms = h.terms();
    let sequence = build_sequence(terms.len(), schedule, |k, dt| build_pauli_step(&terms[k], dt))?;
    let problem = Problem {
        h,
        spectrum,
        ground: spectrum.map(SpectrumInfo::ground_vectors),
        abs_sum: h.abs_coeff_sum(),
        minima: -h.abs_coeff_sum(),
        sequence,
    };
    drive(&problem, init, schedule, config)
}

/// Evolution with one step circuit per grouped block.
pub fn run_generalized(
    gh: &GroupedHamiltonian,
    init: &[Complex64],
    schedule: &Schedule,
    config: &RunConfig,
) -> Result<RunTrace> {
    let spectrum = spectrum_if_feasible(&gh.hamiltonian, init)?;
    run_generalized_with(gh, spectrum.as_ref(), init, schedule, config)
}

pub fn run_generalized_with(
    gh: &GroupedHamiltonian,
    spectrum: Option<&SpectrumInfo>,
    init: &[Complex64],
    schedule: &Schedule,
    config: &RunConfig,
) -> Result<RunTrace> {
    let n = gh.n_qubits;
    let sequence = build_sequence(gh.blocks.len(), schedule, |k, dt| {
        build_grouped_step(&gh.blocks[k], n, dt)
    })?;
    let problem = Problem {
        h: &gh.hamiltonian,
        spectrum,
        ground: spectrum.map(SpectrumInfo::ground_vectors),
        abs_sum: gh.hamiltonian.abs_coeff_sum(),
        minima: gh.block_minima(),
        sequence,
    };
    drive(&problem, init, schedule, config)
}

struct Partial {
    records: Vec<TraceRecord>,
    prob0_log: Vec<f64>,
    final_state: Option<Vec<Complex64>>,
}

fn drive(problem: &Problem, init: &[Complex64], schedule: &Schedule, config: &RunConfig) -> Result<RunTrace> {
    config.validate()?;
    let n = problem.h.n_qubits();
    check_init(n, init)?;
    let pure = StateVector::from_amplitudes(n, init.to_vec())?;
    let start = match config.resolve(n)? {
        Resolved::Trajectories(count) => return run_trajectories(problem, &pure, schedule, config, count),
        Resolved::Pure => Live::Pure(pure),
        Resolved::Mixed => Live::Mixed(DensityMatrix::from_pure(&pure)?),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.unwrap_or(0));
    let noise = config.noise.as_ref();
    let e0 = start.energy(problem.h)?;
    let f0 = start.fidelity(problem.ground.as_deref());
    let recorded: Vec<usize> = problem.records_at(schedule, config.cadence).collect();

    let outcome = restart_loop(config.restart_budget, |restarts| {
        let mut state = start.clone();
        let mut p_cum = 1.0;
        let mut part = Partial {
            records: vec![problem.record(0, 0.0, e0, f0, 1.0, restarts)],
            prob0_log: Vec::with_capacity(schedule.n_steps() * problem.sequence.len()),
            final_state: None,
        };
        let mut next = recorded.iter().peekable();
        for s in 1..=schedule.n_steps() {
            for c in &problem.sequence {
                let o = state.step(c, noise, config.mode, &mut rng)?;
                p_cum *= o.prob0;
                part.prob0_log.push(o.prob0);
                if !o.outcome.succeeded() {
                    return Ok(Attempt::Failure(part));
                }
                state = o.state;
            }
            if next.peek() == Some(&&s) {
                next.next();
                let beta = schedule.beta_at(s);
                let e = state.energy(problem.h)?;
                let f = state.fidelity(problem.ground.as_deref());
                part.records.push(problem.record(s, beta, e, f, p_cum, restarts));
            }
        }
        if let Live::Pure(s) = state {
            part.final_state = Some(s.into_amplitudes());
        }
        Ok(Attempt::Success(part))
    })?;

    Ok(RunTrace {
        measurements: outcome.value.prob0_log.len(),
        records: outcome.value.records,
        status: if outcome.exhausted {
            RunStatus::BudgetExhausted
        } else {
            RunStatus::Completed
        },
        restarts: outcome.restarts,
        prob0_log: outcome.value.prob0_log,
        final_state: outcome.value.final_state,
    })
}

/// Weight, energy and fidelity of one trajectory at each recorded step.
type Samples = Vec<(f64, f64, f64)>;

fn run_trajectories(
    problem: &Problem,
    init: &StateVector,
    schedule: &Schedule,
    config: &RunConfig,
    count: usize,
) -> Result<RunTrace> {
    let seed = config.seed.unwrap_or(0);
    let noise = config.noise.as_ref();
    let ground = problem.ground.as_deref();
    let e0 = init.expectation(problem.h)?;
    let f0 = ground.map_or(f64::NAN, |g| init.subspace_fidelity(g));
    let recorded: Vec<usize> = problem.records_at(schedule, config.cadence).collect();

    let runs: Vec<Samples> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut state = init.clone();
            let mut weight = 1.0;
            let mut out = Vec::with_capacity(recorded.len());
            let mut next = recorded.iter().peekable();
            for s in 1..=schedule.n_steps() {
                for c in &problem.sequence {
                    if weight == 0.0 {
                        break;
                    }
                    match run_step_trajectory(&state, c, noise, MeasureMode::Postselect, &mut rng) {
                        Ok(o) => {
                            weight *= o.prob0;
                            state = o.state;
                        }
                        Err(PiteError::Annihilated { .. }) => weight = 0.0,
                        Err(e) => return Err(e),
                    }
                }
                if next.peek() == Some(&&s) {
                    next.next();
                    if weight > 0.0 {
                        let f = ground.map_or(f64::NAN, |g| state.subspace_fidelity(g));
                        out.push((weight, state.expectation(problem.h)?, f));
                    } else {
                        out.push((0.0, 0.0, 0.0));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut records = vec![problem.record(0, 0.0, e0, f0, 1.0, 0)];
    for (slot, &s) in recorded.iter().enumerate() {
        let total: f64 = runs.iter().map(|r| r[slot].0).sum();
        if !(total > 0.0) {
            return Err(PiteError::Annihilated { prob0: 0.0 });
        }
        let energy = runs.iter().map(|r| r[slot].0 * r[slot].1).sum::<f64>() / total;
        let fidelity = runs.iter().map(|r| r[slot].0 * r[slot].2).sum::<f64>() / total;
        records.push(problem.record(s, schedule.beta_at(s), energy, fidelity, total / count as f64, 0));
    }
    Ok(RunTrace {
        records,
        status: RunStatus::Completed,
        restarts: 0,
        measurements: schedule.n_steps() * problem.sequence.len(),
        prob0_log: Vec::new(),
        final_state: None,
    })
}
