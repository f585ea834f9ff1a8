//! Command-line frontend: `run`, `sweep`, `analyze`, `circuit` and `replay`.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 annihilated evolution or
//! exhausted restart budget, 3 replay verification mismatch.

mod model;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use model::{resolve_grouping, resolve_init, ModelSpec, Prepared};

use crate::analysis::{alb, alb_generalized, fidelity_bound, kappa_exponents, rlb};
use crate::circuit::{build_grouped_step, build_pauli_step, GateCounts};
use crate::engine::{distance_up_to_phase, MeasureMode, NoiseModel};
use crate::error::{PiteError, Result};
use crate::hamiltonian::h2_distances;
use crate::pite::{write_csv, write_json, Backend, RunConfig, RunStatus, RunTrace, Schedule};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILED_RUN: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

pub const THREADS_ENV: &str = "PITE_SIM_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "pite-sim",
    version,
    about = "Probabilistic imaginary-time evolution simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run one evolution and write its trace, JSON mirror and manifest.
    Run(RunArgs),
    /// Run a family of evolutions along one axis and write one row per point.
    Sweep(SweepArgs),
    /// Spectrum summary and success-probability bounds over a β grid.
    Analyze(AnalyzeArgs),
    /// Print the step circuits of a model.
    Circuit(CircuitArgs),
    /// Re-run a manifest written by `run`.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    H2,
    Lih,
    Ising,
    File,
}

#[derive(Args, Clone, Debug)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    /// H2 interatomic distance in Å (tabulated values only).
    #[arg(long = "R", default_value_t = 0.75)]
    pub r: f64,
    /// Ising ring size.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long = "J", default_value_t = 1.0, allow_negative_numbers = true)]
    pub j: f64,
    /// Transverse field.
    #[arg(long, default_value_t = 1.2, allow_negative_numbers = true)]
    pub g: f64,
    /// Longitudinal field.
    #[arg(long = "h", default_value_t = 0.3, allow_negative_numbers = true)]
    pub h: f64,
    /// Hamiltonian text file for `--model file`.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

impl ModelArgs {
    pub fn spec(&self) -> Result<ModelSpec> {
        Ok(match self.model {
            ModelKind::H2 => ModelSpec::H2 { r: self.r },
            ModelKind::Lih => ModelSpec::Lih,
            ModelKind::Ising => ModelSpec::Ising {
                n: self.n,
                j: self.j,
                g: self.g,
                h: self.h,
            },
            ModelKind::File => ModelSpec::File {
                path: self
                    .file
                    .clone()
                    .ok_or_else(|| PiteError::InvalidArgument("--model file needs --file PATH".into()))?,
            },
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Postselect,
    Sample,
}

#[derive(Args, Clone, Debug)]
pub struct EvolveArgs {
    #[arg(long, default_value_t = 0.05)]
    pub dt: f64,
    /// Total imaginary time; must be a whole number of steps.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub order: u8,
    #[arg(long, value_enum, default_value_t = ModeArg::Postselect)]
    pub mode: ModeArg,
    /// Relaxation and dephasing parameters, `EPS_R,EPS_D`.
    #[arg(long)]
    pub noise: Option<String>,
    /// Simulate noise with this many sampled trajectories instead of a density matrix.
    #[arg(long)]
    pub trajectories: Option<usize>,
    /// `pauli`, `ising-local`, `lih` or a grouping file.
    #[arg(long, default_value = "pauli")]
    pub grouping: String,
    /// `hf`, `superposition`, `product`, `product:PHI` or a bit string (qubit 0 first).
    #[arg(long)]
    pub init: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Record observables every this many steps.
    #[arg(long, default_value_t = 1)]
    pub cadence: usize,
    /// Restarts allowed in sample mode.
    #[arg(long, default_value_t = 1000)]
    pub restart_budget: usize,
}

impl EvolveArgs {
    pub fn config(&self) -> Result<RunConfig> {
        let config = self.unchecked_config()?;
        config.validate()?;
        Ok(config)
    }

    fn unchecked_config(&self) -> Result<RunConfig> {
        let noise = self.noise.as_deref().map(parse_noise).transpose()?;
        let backend = match self.trajectories {
            Some(count) => Backend::Trajectories { count },
            None => Backend::Auto,
        };
        let config = RunConfig {
            mode: match self.mode {
                ModeArg::Postselect => MeasureMode::Postselect,
                ModeArg::Sample => MeasureMode::Sample,
            },
            noise,
            backend,
            seed: self.seed,
            cadence: self.cadence,
            restart_budget: self.restart_budget,
        };
        Ok(config)
    }

    fn init_for(&self, model: &ModelSpec) -> String {
        self.init.clone().unwrap_or_else(|| model.default_init().to_string())
    }

    fn schedule(&self, beta: Option<f64>) -> Result<Schedule> {
        let beta = beta
            .or(self.beta)
            .ok_or_else(|| PiteError::InvalidArgument("--beta is required".into()))?;
        Schedule::from_beta(beta, self.dt, self.order)
    }
}

fn parse_noise(s: &str) -> Result<NoiseModel> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || PiteError::InvalidArgument(format!("--noise expects EPS_R,EPS_D, got \"{s}\""));
    if parts.len() != 2 {
        return Err(bad());
    }
    let r: f64 = parts[0].parse().map_err(|_| bad())?;
    let d: f64 = parts[1].parse().map_err(|_| bad())?;
    NoiseModel::new(r, d)
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub evolve: EvolveArgs,
    /// Output stem: writes STEM.csv, STEM.json and STEM.manifest.json.
    #[arg(long, default_value = "trace")]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepAxis {
    #[value(name = "R")]
    R,
    Dt,
    Beta,
    Seed,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub evolve: EvolveArgs,
    #[arg(long, value_enum)]
    pub axis: SweepAxis,
    /// Comma-separated values; seeds also accept `A..B`. The R axis defaults
    /// to every tabulated distance.
    #[arg(long)]
    pub values: Option<String>,
    /// CSV path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub init: Option<String>,
    #[arg(long, default_value = "pauli")]
    pub grouping: String,
    /// Comma-separated β values; overrides the uniform grid.
    #[arg(long)]
    pub betas: Option<String>,
    #[arg(long, default_value_t = 4.0)]
    pub beta_max: f64,
    #[arg(long, default_value_t = 41)]
    pub points: usize,
    /// Output stem: writes STEM.csv and STEM.json. Without it the CSV goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CircuitArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 0.05)]
    pub dt: f64,
    #[arg(long, default_value = "pauli")]
    pub grouping: String,
    /// Only this term (or block), 1-based.
    #[arg(long)]
    pub term: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Output stem; defaults to the paths recorded in the manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Compare the regenerated CSV with the recorded one instead of writing.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputPaths {
    pub csv: PathBuf,
    pub json: PathBuf,
    pub manifest: PathBuf,
}

impl OutputPaths {
    pub fn from_stem(stem: &Path) -> Self {
        let with = |ext: &str| PathBuf::from(format!("{}.{ext}", stem.display()));
        OutputPaths {
            csv: with("csv"),
            json: with("json"),
            manifest: with("manifest.json"),
        }
    }
}

/// Everything needed to regenerate a trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub git_describe: String,
    #[serde(flatten)]
    pub model: ModelSpec,
    pub init: String,
    pub grouping: String,
    pub schedule: Schedule,
    pub config: RunConfig,
    pub outputs: OutputPaths,
}

pub fn tool_version() -> (&'static str, &'static str) {
    (env!("CARGO_PKG_VERSION"), env!("PITE_SIM_GIT_DESCRIBE"))
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| dispatch(cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &PiteError) -> i32 {
    match e {
        PiteError::Annihilated { .. } | PiteError::BudgetExhausted { .. } => EXIT_FAILED_RUN,
        _ => EXIT_USAGE,
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
            PiteError::InvalidArgument(format!("{THREADS_ENV} must be a positive integer, got \"{v}\""))
        })?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| PiteError::InvalidArgument(format!("cannot start worker pool: {e}")))
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Run(a) => cmd_run(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Analyze(a) => cmd_analyze(&a),
        Command::Circuit(a) => cmd_circuit(&a),
        Command::Replay(a) => cmd_replay(&a),
    }
}

fn create_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(())
}

fn write_outputs(trace: &RunTrace, manifest: &RunManifest) -> Result<()> {
    let out = &manifest.outputs;
    create_parent(&out.csv)?;
    let mut csv = BufWriter::new(File::create(&out.csv)?);
    write_csv(&trace.records, &mut csv)?;
    csv.flush()?;
    let mut json = BufWriter::new(File::create(&out.json)?);
    write_json(trace, manifest, &mut json)?;
    json.flush()?;
    let mut m = BufWriter::new(File::create(&out.manifest)?);
    serde_json::to_writer_pretty(&mut m, manifest)?;
    writeln!(m)?;
    m.flush()?;
    Ok(())
}

fn report(trace: &RunTrace, prepared: &Prepared) -> i32 {
    let last = trace.last();
    let exact = prepared.spectrum.as_ref().map_or(f64::NAN, |s| s.e0());
    println!(
        "beta {:.6} energy {:.10} exact {:.10} error {:.3e} fidelity {:.10} p_cum {:.6e} restarts {}",
        last.beta,
        last.energy,
        exact,
        (last.energy - exact).abs(),
        last.fidelity,
        last.p_cum,
        trace.restarts
    );
    if trace.status == RunStatus::BudgetExhausted {
        eprintln!(
            "error: restart budget exhausted after {} restarts; partial trace written",
            trace.restarts
        );
        return EXIT_FAILED_RUN;
    }
    EXIT_OK
}

fn execute_manifest(manifest: &RunManifest) -> Result<(Prepared, RunTrace)> {
    let prepared = Prepared::for_config(&manifest.model, &manifest.init, &manifest.grouping, &manifest.config)?;
    let trace = prepared.run(&manifest.schedule, &manifest.config)?;
    Ok((prepared, trace))
}

pub fn cmd_run(a: &RunArgs) -> Result<i32> {
    let model = a.model.spec()?;
    let (version, describe) = tool_version();
    let manifest = RunManifest {
        tool: "pite-sim".into(),
        version: version.into(),
        git_describe: describe.into(),
        init: a.evolve.init_for(&model),
        model,
        grouping: a.evolve.grouping.clone(),
        schedule: a.evolve.schedule(None)?,
        config: a.evolve.config()?,
        outputs: OutputPaths::from_stem(&a.out),
    };
    let (prepared, trace) = execute_manifest(&manifest)?;
    write_outputs(&trace, &manifest)?;
    Ok(report(&trace, &prepared))
}

pub fn cmd_replay(a: &ReplayArgs) -> Result<i32> {
    let mut manifest: RunManifest = serde_json::from_str(&fs::read_to_string(&a.manifest)?)?;
    let (prepared, trace) = execute_manifest(&manifest)?;
    if a.verify {
        let recorded = fs::read(&manifest.outputs.csv)?;
        let mut fresh = Vec::new();
        write_csv(&trace.records, &mut fresh)?;
        if fresh == recorded {
            println!("identical: {}", manifest.outputs.csv.display());
            return Ok(EXIT_OK);
        }
        eprintln!("regenerated trace differs from {}", manifest.outputs.csv.display());
        return Ok(EXIT_MISMATCH);
    }
    if let Some(stem) = &a.out {
        manifest.outputs = OutputPaths::from_stem(stem);
    }
    write_outputs(&trace, &manifest)?;
    Ok(report(&trace, &prepared))
}

/// One row of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: String,
    pub beta: f64,
    pub energy: f64,
    pub exact_energy: f64,
    pub energy_error: f64,
    /// Distance from the exact imaginary-time state at the same β (pure runs).
    pub state_error: f64,
    pub fidelity: f64,
    pub p_cum: f64,
    pub rlb: f64,
    pub alb: f64,
    pub restarts: usize,
    pub status: &'static str,
}

pub const SWEEP_HEADER: &str =
    "value,beta,energy,exact_energy,energy_error,state_error,fidelity,p_cum,rlb,alb,restarts,status,success_fraction";

fn sweep_values(a: &SweepArgs) -> Result<Vec<String>> {
    let values: Vec<String> = match (&a.values, a.axis) {
        (None, SweepAxis::R) => h2_distances().iter().map(|r| format!("{r}")).collect(),
        (None, _) => return Err(PiteError::InvalidArgument("--values is required for this axis".into())),
        (Some(v), SweepAxis::Seed) if v.contains("..") => {
            let (lo, hi) = v.split_once("..").unwrap_or_default();
            let parse = |s: &str| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| PiteError::InvalidArgument(format!("invalid seed range \"{v}\"")))
            };
            (parse(lo)?..parse(hi)?).map(|s| s.to_string()).collect()
        }
        (Some(v), _) => v
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect(),
    };
    if values.is_empty() {
        return Err(PiteError::InvalidArgument("sweep has no points".into()));
    }
    Ok(values)
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| PiteError::InvalidArgument(format!("invalid number \"{s}\"")))
}

fn sweep_row(value: &str, prepared: &Prepared, schedule: &Schedule, config: &RunConfig) -> Result<SweepRow> {
    let exact = prepared.spectrum.as_ref().map_or(f64::NAN, |s| s.e0());
    let trace = match prepared.run(schedule, config) {
        Ok(t) => t,
        Err(PiteError::Annihilated { .. }) => {
            return Ok(SweepRow {
                value: value.into(),
                beta: schedule.beta(),
                energy: f64::NAN,
                exact_energy: exact,
                energy_error: f64::NAN,
                state_error: f64::NAN,
                fidelity: f64::NAN,
                p_cum: 0.0,
                rlb: rlb(&prepared.hamiltonian, schedule.beta()),
                alb: f64::NAN,
                restarts: 0,
                status: "annihilated",
            })
        }
        Err(e) => return Err(e),
    };
    let last = trace.last();
    let state_error = match (&trace.final_state, &prepared.spectrum) {
        (Some(psi), Some(s)) => distance_up_to_phase(psi, &s.exact_ite_state(last.beta)),
        _ => f64::NAN,
    };
    Ok(SweepRow {
        value: value.into(),
        beta: last.beta,
        energy: last.energy,
        exact_energy: exact,
        energy_error: (last.energy - exact).abs(),
        state_error,
        fidelity: last.fidelity,
        p_cum: last.p_cum,
        rlb: last.rlb,
        alb: last.alb,
        restarts: trace.restarts,
        status: match trace.status {
            RunStatus::Completed => "completed",
            RunStatus::BudgetExhausted => "budget_exhausted",
        },
    })
}

/// Evaluates every sweep point in parallel; rows keep the input order.
pub fn sweep_rows(a: &SweepArgs) -> Result<Vec<SweepRow>> {
    let model = a.model.spec()?;
    let values = sweep_values(a)?;
    let init = a.evolve.init_for(&model);
    let mut base_config = a.evolve.unchecked_config()?;
    if a.axis == SweepAxis::Seed {
        // replaced per point
        base_config.seed = Some(0);
    }
    base_config.validate()?;
    if a.axis == SweepAxis::R {
        if !matches!(model, ModelSpec::H2 { .. }) {
            return Err(PiteError::InvalidArgument("the R axis needs --model h2".into()));
        }
        let schedule = a.evolve.schedule(None)?;
        return values
            .par_iter()
            .map(|v| {
                let model = ModelSpec::H2 { r: parse_f64(v)? };
                let prepared = Prepared::for_config(&model, &init, &a.evolve.grouping, &base_config)?;
                sweep_row(v, &prepared, &schedule, &base_config)
            })
            .collect();
    }
    let prepared = Prepared::for_config(&model, &init, &a.evolve.grouping, &base_config)?;
    values
        .par_iter()
        .map(|v| {
            let mut config = base_config.clone();
            let schedule = match a.axis {
                SweepAxis::Dt => Schedule::from_beta(
                    a.evolve
                        .beta
                        .ok_or_else(|| PiteError::InvalidArgument("--beta is required".into()))?,
                    parse_f64(v)?,
                    a.evolve.order,
                )?,
                SweepAxis::Beta => a.evolve.schedule(Some(parse_f64(v)?))?,
                SweepAxis::Seed => {
                    config.seed = Some(
                        v.parse()
                            .map_err(|_| PiteError::InvalidArgument(format!("invalid seed \"{v}\"")))?,
                    );
                    a.evolve.schedule(None)?
                }
                SweepAxis::R => unreachable!("handled above"),
            };
            sweep_row(v, &prepared, &schedule, &config)
        })
        .collect()
}

pub fn write_sweep<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    let mut successes = 0;
    for (i, r) in rows.iter().enumerate() {
        if r.status == "completed" {
            successes += 1;
        }
        let frac = successes as f64 / (i + 1) as f64;
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{},{:.16e}",
            r.value,
            r.beta,
            r.energy,
            r.exact_energy,
            r.energy_error,
            r.state_error,
            r.fidelity,
            r.p_cum,
            r.rlb,
            r.alb,
            r.restarts,
            r.status,
            frac
        )?;
    }
    Ok(())
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<i32> {
    let rows = sweep_rows(a)?;
    match &a.out {
        Some(path) => {
            create_parent(path)?;
            let mut w = BufWriter::new(File::create(path)?);
            write_sweep(&rows, &mut w)?;
            w.flush()?;
        }
        None => write_sweep(&rows, std::io::stdout().lock())?,
    }
    Ok(EXIT_OK)
}

/// Spectrum summary written by `analyze`.
#[derive(Clone, Debug, Serialize)]
pub struct AnalysisSummary {
    pub n_qubits: usize,
    pub n_terms: usize,
    pub identity_offset: f64,
    pub abs_coeff_sum: f64,
    pub e0: f64,
    pub e_ground_bare: f64,
    pub gap_1: f64,
    pub gap_max: f64,
    pub s0: f64,
    pub ground_dim: usize,
    pub degenerate: bool,
    pub kappa0: f64,
    pub kappa1: f64,
    pub block_minima: Option<f64>,
}

pub const ANALYZE_HEADER: &str = "beta,rlb,alb,alb_generalized,fidelity_bound,exact_energy,exact_fidelity";

pub fn analyze(a: &AnalyzeArgs) -> Result<(AnalysisSummary, String)> {
    let model = a.model.spec()?;
    let init = a.init.clone().unwrap_or_else(|| model.default_init().to_string());
    let prepared = Prepared::new(&model, &init, &a.grouping)?;
    let h = &prepared.hamiltonian;
    let s = prepared.spectrum.as_ref().ok_or(PiteError::DimensionTooLarge {
        what: "exact diagonalization",
        n_qubits: h.n_qubits(),
        limit: crate::analysis::MAX_DIAG_QUBITS,
    })?;
    let (kappa0, kappa1) = kappa_exponents(h, s).map_or((f64::NAN, f64::NAN), |k| (k.kappa0, k.kappa1));
    let minima = prepared.grouped.as_ref().map(|g| g.block_minima());
    let summary = AnalysisSummary {
        n_qubits: h.n_qubits(),
        n_terms: h.terms().len(),
        identity_offset: h.identity_offset(),
        abs_coeff_sum: h.abs_coeff_sum(),
        e0: s.e0(),
        e_ground_bare: s.e_ground_bare(),
        gap_1: s.gap_1,
        gap_max: s.gap_max,
        s0: s.s0,
        ground_dim: s.ground_dim,
        degenerate: s.degenerate,
        kappa0,
        kappa1,
        block_minima: minima,
    };
    let betas: Vec<f64> = match &a.betas {
        Some(list) => list.split(',').map(|v| parse_f64(v.trim())).collect::<Result<_>>()?,
        None => {
            if a.points < 2 || !(a.beta_max > 0.0) {
                return Err(PiteError::InvalidArgument(
                    "β grid needs --points >= 2 and --beta-max > 0".into(),
                ));
            }
            (0..a.points)
                .map(|i| a.beta_max * i as f64 / (a.points - 1) as f64)
                .collect()
        }
    };
    if betas.is_empty() || betas.iter().any(|b| !(*b >= 0.0)) {
        return Err(PiteError::InvalidArgument("β values must be non-negative".into()));
    }
    let mut csv = String::new();
    writeln!(csv, "{ANALYZE_HEADER}").expect("writing to a String");
    for &beta in &betas {
        let nan = f64::NAN;
        let a_pauli = alb(h, s, beta).unwrap_or(nan);
        let a_gen = minima.map_or(nan, |m| alb_generalized(m, s, beta).unwrap_or(nan));
        let fb = fidelity_bound(s.s0, s.gap_1, beta).unwrap_or(nan);
        writeln!(
            csv,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            beta,
            rlb(h, beta),
            a_pauli,
            a_gen,
            fb,
            s.exact_ite_energy(beta),
            s.exact_ite_fidelity(beta)
        )
        .expect("writing to a String");
    }
    Ok((summary, csv))
}

pub fn cmd_analyze(a: &AnalyzeArgs) -> Result<i32> {
    let (summary, csv) = analyze(a)?;
    println!(
        "E0 {:.10} Omega1 {:.10} Omega_max {:.10} s0 {:.10} kappa0 {:.6} kappa1 {:.6} sum|c| {:.10}{}",
        summary.e0,
        summary.gap_1,
        summary.gap_max,
        summary.s0,
        summary.kappa0,
        summary.kappa1,
        summary.abs_coeff_sum,
        if summary.degenerate {
            " (degenerate ground space)"
        } else {
            ""
        }
    );
    match &a.out {
        Some(stem) => {
            let paths = OutputPaths::from_stem(stem);
            create_parent(&paths.csv)?;
            fs::write(&paths.csv, csv)?;
            fs::write(&paths.json, serde_json::to_string_pretty(&summary)? + "\n")?;
        }
        None => print!("{csv}"),
    }
    Ok(EXIT_OK)
}

pub fn cmd_circuit(a: &CircuitArgs) -> Result<i32> {
    let model = a.model.spec()?;
    let h = model.build()?;
    let grouped = resolve_grouping(&model, &h, &a.grouping)?;
    let n = h.n_qubits();
    let count = grouped.as_ref().map_or(h.terms().len(), |g| g.blocks.len());
    let selected: Vec<usize> = match a.term {
        Some(k) if k >= 1 && k <= count => vec![k - 1],
        Some(k) => return Err(PiteError::InvalidArgument(format!("--term {k} outside 1..={count}"))),
        None => (0..count).collect(),
    };
    let mut total = GateCounts::default();
    let mut out = std::io::stdout().lock();
    for k in selected {
        let (label, circuit) = match &grouped {
            Some(g) => {
                let b = &g.blocks[k];
                (
                    format!("block {} on qubits {:?}", k + 1, b.support),
                    build_grouped_step(b, n, a.dt)?,
                )
            }
            None => (
                format!("term {}: {}", k + 1, h.terms()[k]),
                build_pauli_step(&h.terms()[k], a.dt)?,
            ),
        };
        let counts = circuit.gate_counts();
        total.add(&counts);
        writeln!(out, "# {label} ({} gates)", counts.total())?;
        write!(out, "{}", circuit.dump())?;
    }
    writeln!(out, "# total gates {}", total.total())?;
    Ok(EXIT_OK)
}
