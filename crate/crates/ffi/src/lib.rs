//! C interface to `semiostat`.
//!
//! Every fallible function returns a [`SemiostatStatus`]; on failure the
//! message is available from [`semiostat_last_error`] on the same thread.
//! Handles are opaque and must be released with their `_free` function.
//! Strings returned through out-parameters are released with
//! [`semiostat_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use libc::{c_char, c_int, size_t};
use semiostat::dsl::{self, RunOptions, Scenario};
use semiostat::scalar::{self, ScalarParams, Stability, TrajectoryRecord, TrajectoryStatus};
use semiostat::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemiostatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidParam = 4,
    Io = 5,
    RunFailed = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Parsed scenario.
pub struct SemiostatScenario {
    scenario: Scenario,
}

/// Recorded scalar trajectory.
pub struct SemiostatTrajectory {
    record: TrajectoryRecord,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiostatScalarParams {
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub tol: f64,
    pub max_iter: size_t,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiostatContractionReport {
    pub bound: f64,
    pub is_certified: bool,
    pub empirical_max: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemiostatTrajectoryKind {
    Converged = 0,
    MaxIterReached = 1,
    CycleDetected = 2,
}

/// `fixed_point` and `step` are meaningful for `CONVERGED`, `period` for
/// `CYCLE_DETECTED`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiostatTrajectoryStatus {
    pub kind: SemiostatTrajectoryKind,
    pub fixed_point: f64,
    pub step: size_t,
    pub period: size_t,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemiostatStability {
    Attracting = 0,
    Repelling = 1,
    Neutral = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiostatFixedPoint {
    pub x: f64,
    pub derivative: f64,
    pub stability: SemiostatStability,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(SemiostatStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Io { .. } => SemiostatStatus::Io,
            Error::InvalidParam { .. } | Error::NonFinite { .. } => SemiostatStatus::InvalidParam,
            _ => SemiostatStatus::RunFailed,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, recording errors and converting panics into `PANIC`.
fn guard<F>(f: F) -> SemiostatStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SemiostatStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {message}"));
            SemiostatStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(SemiostatStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(SemiostatStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn reference<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior nul removed").into_raw()
}

unsafe fn params(p: *const SemiostatScalarParams) -> Result<ScalarParams, Failure> {
    let p = reference(p, "params")?;
    let params = ScalarParams { alpha: p.alpha, beta: p.beta, epsilon: p.epsilon, tol: p.tol, max_iter: p.max_iter };
    params.validate()?;
    Ok(params)
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn semiostat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn semiostat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and resolves a scenario; `*out` receives a new handle.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn semiostat_scenario_parse(
    text: *const c_char,
    out_handle: *mut *mut SemiostatScenario,
) -> SemiostatStatus {
    guard(|| {
        let slot = out(out_handle, "out")?;
        *slot = ptr::null_mut();
        let text = read_str(text, "text")?;
        let scenario = dsl::parse_scenario(text).map_err(|e| Failure(SemiostatStatus::Parse, e.to_string()))?;
        *slot = Box::into_raw(Box::new(SemiostatScenario { scenario }));
        Ok(())
    })
}

/// # Safety
/// `handle` must be null or a handle from [`semiostat_scenario_parse`] not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn semiostat_scenario_free(handle: *mut SemiostatScenario) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Runs all directives. `out_dir` may be null, in which case plots are
/// skipped. `*report` receives the report text and `*failed` is set to 1 if
/// any run failed.
///
/// # Safety
/// Pointers must be valid; `out_dir` may be null.
#[no_mangle]
pub unsafe extern "C" fn semiostat_scenario_run(
    handle: *const SemiostatScenario,
    out_dir: *const c_char,
    report: *mut *mut c_char,
    failed: *mut c_int,
) -> SemiostatStatus {
    guard(|| {
        let h = reference(handle, "scenario")?;
        let report = out(report, "report")?;
        let failed = out(failed, "failed")?;
        let out_dir = if out_dir.is_null() { None } else { Some(PathBuf::from(read_str(out_dir, "out_dir")?)) };
        let r = dsl::run_scenario(&h.scenario, &RunOptions { out_dir })?;
        *failed = c_int::from(r.failed());
        *report = c_string(r.text);
        Ok(())
    })
}

/// Runs only the law checks.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn semiostat_scenario_check(
    handle: *const SemiostatScenario,
    report: *mut *mut c_char,
    failed: *mut c_int,
) -> SemiostatStatus {
    guard(|| {
        let h = reference(handle, "scenario")?;
        let report = out(report, "report")?;
        let failed = out(failed, "failed")?;
        let r = dsl::check_scenario(&h.scenario)?;
        *failed = c_int::from(r.failed());
        *report = c_string(r.text);
        Ok(())
    })
}

/// Canonical text of the scenario.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn semiostat_scenario_pretty(
    handle: *const SemiostatScenario,
    text: *mut *mut c_char,
) -> SemiostatStatus {
    guard(|| {
        let h = reference(handle, "scenario")?;
        *out(text, "text")? = c_string(dsl::pretty(&h.scenario));
        Ok(())
    })
}

/// Default epsilon, tolerance and iteration cap for the given map.
#[no_mangle]
pub extern "C" fn semiostat_scalar_params_default(alpha: f64, beta: f64) -> SemiostatScalarParams {
    SemiostatScalarParams {
        alpha,
        beta,
        epsilon: ScalarParams::DEFAULT_EPSILON,
        tol: ScalarParams::DEFAULT_TOL,
        max_iter: ScalarParams::DEFAULT_MAX_ITER,
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn semiostat_phi(p: *const SemiostatScalarParams, x: f64, value: *mut f64) -> SemiostatStatus {
    guard(|| {
        let p = params(p)?;
        *out(value, "value")? = scalar::phi(&p, x)?;
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn semiostat_phi_derivative(
    p: *const SemiostatScalarParams,
    x: f64,
    value: *mut f64,
) -> SemiostatStatus {
    guard(|| {
        let p = params(p)?;
        *out(value, "value")? = scalar::phi_derivative(&p, x)?;
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn semiostat_contraction_report(
    p: *const SemiostatScalarParams,
    report: *mut SemiostatContractionReport,
) -> SemiostatStatus {
    guard(|| {
        let p = params(p)?;
        let r = scalar::contraction_report(&p)?;
        *out(report, "report")? =
            SemiostatContractionReport { bound: r.bound, is_certified: r.is_certified, empirical_max: r.empirical_max };
        Ok(())
    })
}

/// Iterates the projected map from `x0`; `*out` receives a new handle.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn semiostat_iterate(
    p: *const SemiostatScalarParams,
    x0: f64,
    out_handle: *mut *mut SemiostatTrajectory,
) -> SemiostatStatus {
    guard(|| {
        let slot = out(out_handle, "out")?;
        *slot = ptr::null_mut();
        let p = params(p)?;
        let record = scalar::iterate(&p, x0)?;
        *slot = Box::into_raw(Box::new(SemiostatTrajectory { record }));
        Ok(())
    })
}

/// # Safety
/// `handle` must be null or a live handle from [`semiostat_iterate`].
#[no_mangle]
pub unsafe extern "C" fn semiostat_trajectory_free(handle: *mut SemiostatTrajectory) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of samples `x_0, …, x_T`; 0 for a null handle.
///
/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn semiostat_trajectory_len(handle: *const SemiostatTrajectory) -> size_t {
    handle.as_ref().map_or(0, |h| h.record.samples.len())
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn semiostat_trajectory_status(
    handle: *const SemiostatTrajectory,
    status: *mut SemiostatTrajectoryStatus,
) -> SemiostatStatus {
    guard(|| {
        let h = reference(handle, "trajectory")?;
        let mut s = SemiostatTrajectoryStatus {
            kind: SemiostatTrajectoryKind::MaxIterReached,
            fixed_point: f64::NAN,
            step: 0,
            period: 0,
        };
        match h.record.status {
            TrajectoryStatus::Converged { fixed_point, step } => {
                s.kind = SemiostatTrajectoryKind::Converged;
                s.fixed_point = fixed_point;
                s.step = step;
            }
            TrajectoryStatus::MaxIterReached => {}
            TrajectoryStatus::CycleDetected { period } => {
                s.kind = SemiostatTrajectoryKind::CycleDetected;
                s.period = period;
            }
        }
        *out(status, "status")? = s;
        Ok(())
    })
}

/// Copies the sample values into `buffer`. `*written` receives the number
/// of samples; if `capacity` is too small nothing is copied and
/// `BUFFER_TOO_SMALL` is returned with `*written` set to the required size.
///
/// # Safety
/// `buffer` must have room for `capacity` doubles (or be null when
/// `capacity` is 0).
#[no_mangle]
pub unsafe extern "C" fn semiostat_trajectory_samples(
    handle: *const SemiostatTrajectory,
    buffer: *mut f64,
    capacity: size_t,
    written: *mut size_t,
) -> SemiostatStatus {
    guard(|| {
        let h = reference(handle, "trajectory")?;
        let written = out(written, "written")?;
        let samples = &h.record.samples;
        *written = samples.len();
        if capacity < samples.len() {
            return Err(Failure(
                SemiostatStatus::BufferTooSmall,
                format!("need {} samples, capacity {capacity}", samples.len()),
            ));
        }
        if buffer.is_null() {
            return Err(null("buffer"));
        }
        let dst = std::slice::from_raw_parts_mut(buffer, samples.len());
        for (d, (_, x)) in dst.iter_mut().zip(samples) {
            *d = *x;
        }
        Ok(())
    })
}

/// Fixed points in `[lo, hi]`, with the same buffer protocol as
/// [`semiostat_trajectory_samples`].
///
/// # Safety
/// `buffer` must have room for `capacity` entries (or be null when
/// `capacity` is 0).
#[no_mangle]
pub unsafe extern "C" fn semiostat_find_fixed_points(
    p: *const SemiostatScalarParams,
    lo: f64,
    hi: f64,
    buffer: *mut SemiostatFixedPoint,
    capacity: size_t,
    count: *mut size_t,
) -> SemiostatStatus {
    guard(|| {
        let p = params(p)?;
        let count = out(count, "count")?;
        let points = scalar::find_fixed_points(&p, lo, hi)?;
        *count = points.len();
        if capacity < points.len() {
            return Err(Failure(
                SemiostatStatus::BufferTooSmall,
                format!("need {} entries, capacity {capacity}", points.len()),
            ));
        }
        if points.is_empty() {
            return Ok(());
        }
        if buffer.is_null() {
            return Err(null("buffer"));
        }
        let dst = std::slice::from_raw_parts_mut(buffer, points.len());
        for (d, fp) in dst.iter_mut().zip(&points) {
            *d = SemiostatFixedPoint {
                x: fp.x,
                derivative: fp.derivative,
                stability: match fp.stability {
                    Stability::Attracting => SemiostatStability::Attracting,
                    Stability::Repelling => SemiostatStability::Repelling,
                    Stability::Neutral => SemiostatStability::Neutral,
                },
            };
        }
        Ok(())
    })
}
