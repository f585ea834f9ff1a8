//! C interface to the simulator.
//!
//! Objects are opaque heap handles created by `pite_*_new`-style functions and
//! released with the matching `*_free`. Every fallible call returns a
//! [`PiteStatus`]; the message of the last failure on the calling thread is
//! available from [`pite_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use pite_sim::cli::{resolve_grouping, resolve_init, ModelSpec, Prepared};
use pite_sim::engine::{MeasureMode, NoiseModel};
use pite_sim::hamiltonian::{prepare_initial, PauliHamiltonian};
use pite_sim::pite::{spectrum_if_feasible, write_csv, Backend, RunConfig, RunStatus, RunTrace, Schedule};
use pite_sim::PiteError;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PiteStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    DimensionTooLarge = 4,
    Annihilated = 5,
    BudgetExhausted = 6,
    Vacuous = 7,
    Io = 8,
    Unavailable = 9,
    Panic = 10,
}

impl From<&PiteError> for PiteStatus {
    fn from(e: &PiteError) -> Self {
        match e {
            PiteError::Parse { .. } | PiteError::Json(_) => PiteStatus::Parse,
            PiteError::DimensionTooLarge { .. } | PiteError::SupportTooLarge { .. } => PiteStatus::DimensionTooLarge,
            PiteError::Annihilated { .. } => PiteStatus::Annihilated,
            PiteError::BudgetExhausted { .. } => PiteStatus::BudgetExhausted,
            PiteError::Vacuous(_) => PiteStatus::Vacuous,
            PiteError::Io(_) => PiteStatus::Io,
            _ => PiteStatus::InvalidArgument,
        }
    }
}

/// A model with its initial state, grouping and (when small enough) spectrum.
pub struct PiteModel {
    inner: Prepared,
}

/// The observable trace of one run.
pub struct PiteTrace {
    inner: RunTrace,
}

/// One row of a trace.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PiteRecord {
    pub step: usize,
    pub beta: f64,
    pub energy: f64,
    pub fidelity: f64,
    pub p_cum: f64,
    pub rlb: f64,
    pub alb: f64,
    pub restarts: usize,
}

/// Run settings. Obtain defaults from [`pite_run_options_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PiteRunOptions {
    pub dt: f64,
    pub beta: f64,
    /// 1 or 2.
    pub order: u32,
    /// Sample ancilla outcomes and restart on failure instead of postselecting.
    pub sample: bool,
    pub seed: u64,
    pub noisy: bool,
    pub eps_relax: f64,
    pub eps_dephase: f64,
    /// Zero selects the density-matrix backend for noisy runs.
    pub trajectories: usize,
    pub cadence: usize,
    pub restart_budget: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard<F>(f: F) -> PiteStatus
where
    F: FnOnce() -> Result<(), (PiteStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            PiteStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PiteStatus::Panic
        }
    }
}

fn fail(e: PiteError) -> (PiteStatus, String) {
    ((&e).into(), e.to_string())
}

fn null(what: &str) -> (PiteStatus, String) {
    (PiteStatus::NullPointer, format!("{what} is null"))
}

unsafe fn opt_str<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, (PiteStatus, String)> {
    if p.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Some)
        .map_err(|_| (PiteStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

unsafe fn req_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (PiteStatus, String)> {
    opt_str(p, what)?.ok_or_else(|| null(what))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

unsafe fn new_model(
    spec: ModelSpec,
    init: *const c_char,
    grouping: *const c_char,
    out: *mut *mut PiteModel,
) -> PiteStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let init = opt_str(init, "init")?.unwrap_or(spec.default_init()).to_string();
        let grouping = opt_str(grouping, "grouping")?.unwrap_or("pauli").to_string();
        let inner = Prepared::new(&spec, &init, &grouping).map_err(fail)?;
        emit(out, PiteModel { inner });
        Ok(())
    })
}

/// H2 at a tabulated distance `r` (Å). `init` and `grouping` may be null.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pite_model_h2(
    r: f64,
    init: *const c_char,
    grouping: *const c_char,
    out: *mut *mut PiteModel,
) -> PiteStatus {
    new_model(ModelSpec::H2 { r }, init, grouping, out)
}

/// Six-qubit LiH.
///
/// # Safety
/// See [`pite_model_h2`].
#[no_mangle]
pub unsafe extern "C" fn pite_model_lih(
    init: *const c_char,
    grouping: *const c_char,
    out: *mut *mut PiteModel,
) -> PiteStatus {
    new_model(ModelSpec::Lih, init, grouping, out)
}

/// Periodic transverse-field Ising ring.
///
/// # Safety
/// See [`pite_model_h2`].
#[no_mangle]
pub unsafe extern "C" fn pite_model_ising(
    n: usize,
    j: f64,
    g: f64,
    h: f64,
    init: *const c_char,
    grouping: *const c_char,
    out: *mut *mut PiteModel,
) -> PiteStatus {
    new_model(ModelSpec::Ising { n, j, g, h }, init, grouping, out)
}

/// Hamiltonian from a text file; `grouping` may name a grouping file.
///
/// # Safety
/// See [`pite_model_h2`]; `path` must not be null.
#[no_mangle]
pub unsafe extern "C" fn pite_model_file(
    path: *const c_char,
    init: *const c_char,
    grouping: *const c_char,
    out: *mut *mut PiteModel,
) -> PiteStatus {
    let path = match req_str(path, "path") {
        Ok(p) => PathBuf::from(p),
        Err((s, m)) => {
            set_error(&m);
            return s;
        }
    };
    new_model(ModelSpec::File { path }, init, grouping, out)
}

/// Hamiltonian from in-memory text, ungrouped. `init` is `hf` (all zeros),
/// `product:PHI` or a bit string, and may be null.
///
/// # Safety
/// `text` must be NUL-terminated; `init` null or NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pite_model_parse(
    text: *const c_char,
    init: *const c_char,
    out: *mut *mut PiteModel,
) -> PiteStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let h = PauliHamiltonian::parse(req_str(text, "text")?).map_err(fail)?;
        let n = h.n_qubits();
        let spec = ModelSpec::File { path: PathBuf::new() };
        let init = opt_str(init, "init")?.unwrap_or("hf");
        let state = resolve_init(&spec, init, n).map_err(fail)?;
        let init = prepare_initial(&state, n).map_err(fail)?;
        let grouped = resolve_grouping(&spec, &h, "pauli").map_err(fail)?;
        let spectrum = spectrum_if_feasible(&h, &init).map_err(fail)?;
        emit(
            out,
            PiteModel {
                inner: Prepared {
                    hamiltonian: h,
                    grouped,
                    init,
                    spectrum,
                },
            },
        );
        Ok(())
    })
}

/// # Safety
/// `model` must come from a `pite_model_*` constructor or be null.
#[no_mangle]
pub unsafe extern "C" fn pite_model_free(model: *mut PiteModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Work-register size, 0 for a null handle.
///
/// # Safety
/// `model` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pite_model_n_qubits(model: *const PiteModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.hamiltonian.n_qubits())
}

/// Exact ground energy, offset included.
///
/// # Safety
/// `model` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pite_model_ground_energy(model: *const PiteModel, out: *mut f64) -> PiteStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = m.inner.spectrum.as_ref().ok_or((
            PiteStatus::Unavailable,
            "model is too large for exact diagonalization".into(),
        ))?;
        *out = s.e0();
        Ok(())
    })
}

/// Noiseless postselected first-order run with `dt = 0.05`, `β = 1`.
#[no_mangle]
pub extern "C" fn pite_run_options_default() -> PiteRunOptions {
    PiteRunOptions {
        dt: 0.05,
        beta: 1.0,
        order: 1,
        sample: false,
        seed: 0,
        noisy: false,
        eps_relax: 0.0,
        eps_dephase: 0.0,
        trajectories: 0,
        cadence: 1,
        restart_budget: 1000,
    }
}

fn to_config(o: &PiteRunOptions) -> pite_sim::Result<(Schedule, RunConfig)> {
    let order = u8::try_from(o.order).map_err(|_| PiteError::InvalidArgument(format!("order {}", o.order)))?;
    let schedule = Schedule::from_beta(o.beta, o.dt, order)?;
    let noise = if o.noisy {
        Some(NoiseModel::new(o.eps_relax, o.eps_dephase)?)
    } else {
        None
    };
    let config = RunConfig {
        mode: if o.sample {
            MeasureMode::Sample
        } else {
            MeasureMode::Postselect
        },
        noise,
        backend: match o.trajectories {
            0 => Backend::Auto,
            count => Backend::Trajectories { count },
        },
        seed: Some(o.seed),
        cadence: o.cadence,
        restart_budget: o.restart_budget,
    };
    config.validate()?;
    Ok((schedule, config))
}

/// Runs `model`. On budget exhaustion the partial trace is still returned
/// through `out` together with `BudgetExhausted`.
///
/// # Safety
/// `model` and `options` must be valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pite_run(
    model: *const PiteModel,
    options: *const PiteRunOptions,
    out: *mut *mut PiteTrace,
) -> PiteStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let o = options.as_ref().ok_or_else(|| null("options"))?;
        let (schedule, config) = to_config(o).map_err(fail)?;
        let trace = m.inner.run(&schedule, &config).map_err(fail)?;
        let exhausted = trace.status == RunStatus::BudgetExhausted;
        let restarts = trace.restarts;
        emit(out, PiteTrace { inner: trace });
        if exhausted {
            return Err(fail(PiteError::BudgetExhausted { budget: restarts }));
        }
        Ok(())
    })
}

/// # Safety
/// `trace` must come from [`pite_run`] or be null.
#[no_mangle]
pub unsafe extern "C" fn pite_trace_free(trace: *mut PiteTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}

/// Number of records, 0 for a null handle.
///
/// # Safety
/// `trace` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pite_trace_len(trace: *const PiteTrace) -> usize {
    trace.as_ref().map_or(0, |t| t.inner.records.len())
}

/// Total restarts, 0 for a null handle.
///
/// # Safety
/// `trace` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pite_trace_restarts(trace: *const PiteTrace) -> usize {
    trace.as_ref().map_or(0, |t| t.inner.restarts)
}

/// # Safety
/// `trace` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pite_trace_record(trace: *const PiteTrace, index: usize, out: *mut PiteRecord) -> PiteStatus {
    guard(|| {
        let t = trace.as_ref().ok_or_else(|| null("trace"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = t.inner.records.get(index).ok_or_else(|| {
            (
                PiteStatus::InvalidArgument,
                format!("record {index} out of range ({} records)", t.inner.records.len()),
            )
        })?;
        *out = PiteRecord {
            step: r.step,
            beta: r.beta,
            energy: r.energy,
            fidelity: r.fidelity,
            p_cum: r.p_cum,
            rlb: r.rlb,
            alb: r.alb,
            restarts: r.restarts,
        };
        Ok(())
    })
}

/// Writes the trace as CSV.
///
/// # Safety
/// `trace` must be a live handle; `path` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn pite_trace_write_csv(trace: *const PiteTrace, path: *const c_char) -> PiteStatus {
    guard(|| {
        let t = trace.as_ref().ok_or_else(|| null("trace"))?;
        let path = req_str(path, "path")?;
        let io = |e: std::io::Error| fail(e.into());
        let mut w = BufWriter::new(File::create(path).map_err(io)?);
        write_csv(&t.inner.records, &mut w).map_err(fail)?;
        w.flush().map_err(io)
    })
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`) and returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn pite_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let bytes = e.borrow();
        let bytes = bytes.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pite_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
