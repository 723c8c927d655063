// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! C ABI over `qcs-core`.
//!
//! Objects are opaque handles created by `qcs_*_new`/`qcs_*_from_*`/`qcs_compile_*`
//! and released with the matching `qcs_*_free`. Functions that can fail
//! return a [`QcsStatus`]; on failure `qcs_last_error_message` describes the
//! cause for the calling thread. Strings returned by the library are owned
//! by the caller and released with `qcs_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qcs_core::linalg::DeviationDensityMatrix;
use qcs_core::nmr::{compile_gate, compile_network, physical_form, program_propagator, GateSpec, NoiseParams, PulseProgram, SpinSystem};
use qcs_core::pipeline::run_nmr;
use qcs_core::protocol::{run_qcs, ProtocolParams};
use qcs_core::tomography::density_to_json;
use qcs_core::QcsError;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    DimensionMismatch = 4,
    InfeasibleSchedule = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Noise settings for [`qcs_run_nmr`]. The dephasing rate applies to every spin.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QcsNoise {
    pub dephasing_rate: f64,
    pub pulse_angle_error: f64,
    pub pulse_angle_jitter: f64,
    pub seed: u64,
}

/// Summary of one NMR run.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct QcsNmrResult {
    pub fidelity: f64,
    pub overlap: f64,
    pub purity_ratio: f64,
    pub prep_residual: f64,
    pub j_peak: usize,
    pub probabilities: [f64; 4],
}

pub struct QcsSpinSystem(SpinSystem);

pub struct QcsPulseProgram(PulseProgram);

pub struct QcsDensityMatrix(DeviationDensityMatrix);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).expect("nul bytes removed"));
}

fn status_of(e: &QcsError) -> QcsStatus {
    match e {
        QcsError::Parse { .. } | QcsError::Json(_) | QcsError::UnsupportedGate(_) => QcsStatus::ParseError,
        QcsError::DimensionMismatch { .. } => QcsStatus::DimensionMismatch,
        QcsError::InfeasibleSchedule(_) => QcsStatus::InfeasibleSchedule,
        _ => QcsStatus::InvalidArgument,
    }
}

/// Runs `f`, recording any error or panic for `qcs_last_error_message`.
fn guard(f: impl FnOnce() -> Result<(), QcsStatus>) -> QcsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            QcsStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            QcsStatus::Panic
        }
    }
}

fn fail<T>(e: QcsError) -> Result<T, QcsStatus> {
    set_error(e.to_string());
    Err(status_of(&e))
}

fn lift<T>(r: qcs_core::Result<T>) -> Result<T, QcsStatus> {
    r.or_else(fail)
}

fn null(what: &str) -> QcsStatus {
    set_error(format!("{what} is null"));
    QcsStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, QcsStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, QcsStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        QcsStatus::InvalidArgument
    })
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), QcsStatus> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), QcsStatus> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = CString::new(s).map_err(|_| QcsStatus::InvalidArgument)?.into_raw();
    Ok(())
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qcs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or "" after a success.
/// Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn qcs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn qcs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The default three-spin register.
#[no_mangle]
pub extern "C" fn qcs_spin_system_new_default() -> *mut QcsSpinSystem {
    Box::into_raw(Box::new(QcsSpinSystem(SpinSystem::default())))
}

/// Parses a `key = value` spin-system config.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn qcs_spin_system_from_config(text: *const c_char, out: *mut *mut QcsSpinSystem) -> QcsStatus {
    guard(|| {
        let sys = lift(SpinSystem::from_config_str(c_str(text, "text")?))?;
        put(out, QcsSpinSystem(sys))
    })
}

/// Number of spins, or 0 for a null handle.
///
/// # Safety
/// `sys` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcs_spin_system_num_spins(sys: *const QcsSpinSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.0.num_spins())
}

/// # Safety
/// `sys` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn qcs_spin_system_free(sys: *mut QcsSpinSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Compiles a named gate (`h12`, `h2`, `h1`, `phase11`, `rx1` ... `ry3`).
/// With `physical` set, selective delays and z rotations are expanded into
/// hard pulses.
///
/// # Safety
/// `sys` must be a live handle, `name` a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_compile_gate(
    sys: *const QcsSpinSystem,
    name: *const c_char,
    physical: bool,
    out: *mut *mut QcsPulseProgram,
) -> QcsStatus {
    guard(|| {
        let sys = &deref(sys, "spin system")?.0;
        let gate: GateSpec = lift(c_str(name, "name")?.parse())?;
        let mut p = lift(compile_gate(gate, sys))?;
        if physical {
            p = lift(physical_form(&p, sys))?;
        }
        put(out, QcsPulseProgram(p))
    })
}

/// Compiles the two-working-qubit synchronization network for `omega_delta`.
///
/// # Safety
/// `sys` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_compile_network(
    sys: *const QcsSpinSystem,
    omega_delta: f64,
    physical: bool,
    out: *mut *mut QcsPulseProgram,
) -> QcsStatus {
    guard(|| {
        let sys = &deref(sys, "spin system")?.0;
        let params = lift(ProtocolParams::from_omega_delta(2, omega_delta))?;
        let mut p = lift(compile_network(&params, sys))?;
        if physical {
            p = lift(physical_form(&p, sys))?;
        }
        put(out, QcsPulseProgram(p))
    })
}

/// Parses a program in the text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_program_parse(text: *const c_char, out: *mut *mut QcsPulseProgram) -> QcsStatus {
    guard(|| {
        let p = lift(PulseProgram::parse(c_str(text, "text")?))?;
        put(out, QcsPulseProgram(p))
    })
}

/// Text form of a program; release with `qcs_string_free`.
///
/// # Safety
/// `prog` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_program_to_text(prog: *const QcsPulseProgram, out: *mut *mut c_char) -> QcsStatus {
    guard(|| put_string(out, deref(prog, "program")?.0.to_string()))
}

/// Number of pulses in a program, or 0 for a null handle.
///
/// # Safety
/// `prog` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcs_program_pulse_count(prog: *const QcsPulseProgram) -> usize {
    prog.as_ref().map_or(0, |p| p.0.pulse_count())
}

/// Phase-aligned max deviation of the program's propagator from a named
/// ideal gate.
///
/// # Safety
/// Handles must be live, `gate` NUL-terminated and `deviation` writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_program_gate_deviation(
    prog: *const QcsPulseProgram,
    sys: *const QcsSpinSystem,
    gate: *const c_char,
    deviation: *mut f64,
) -> QcsStatus {
    guard(|| {
        let prog = &deref(prog, "program")?.0;
        let sys = &deref(sys, "spin system")?.0;
        let gate: GateSpec = lift(c_str(gate, "gate")?.parse())?;
        if deviation.is_null() {
            return Err(null("deviation"));
        }
        *deviation = lift(program_propagator(prog, sys))?.phase_aligned_distance(&gate.ideal());
        Ok(())
    })
}

/// # Safety
/// `prog` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn qcs_program_free(prog: *mut QcsPulseProgram) {
    if !prog.is_null() {
        drop(Box::from_raw(prog));
    }
}

/// Gate-level protocol on `m` working qubits. Writes the `2^m` outcome
/// probabilities to `probs` (capacity `len`) and the most likely outcome to
/// `j_peak`.
///
/// # Safety
/// `probs` must point to `len` writable doubles and `j_peak` be writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_run_ideal(
    m: usize,
    omega_delta: f64,
    probs: *mut f64,
    len: usize,
    j_peak: *mut usize,
) -> QcsStatus {
    guard(|| {
        if probs.is_null() || j_peak.is_null() {
            return Err(null("output pointer"));
        }
        let params = lift(ProtocolParams::from_omega_delta(m, omega_delta))?;
        let outcome = lift(run_qcs(&params))?;
        if len < outcome.distribution.len() {
            set_error(format!("need room for {} probabilities, got {len}", outcome.distribution.len()));
            return Err(QcsStatus::BufferTooSmall);
        }
        std::slice::from_raw_parts_mut(probs, outcome.distribution.len()).copy_from_slice(&outcome.distribution);
        *j_peak = outcome.j_peak;
        Ok(())
    })
}

/// Simulated NMR experiment for `omega_delta` on a three-spin register.
/// `noise` may be null. `final_state` may be null; otherwise it receives the
/// tomographically reconstructed output state.
///
/// # Safety
/// `sys` must be a live handle, `noise` null or valid, `result` writable and
/// `final_state` null or writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_run_nmr(
    sys: *const QcsSpinSystem,
    omega_delta: f64,
    noise: *const QcsNoise,
    result: *mut QcsNmrResult,
    final_state: *mut *mut QcsDensityMatrix,
) -> QcsStatus {
    guard(|| {
        let sys = &deref(sys, "spin system")?.0;
        if result.is_null() {
            return Err(null("result"));
        }
        let params = lift(ProtocolParams::from_omega_delta(2, omega_delta))?;
        let noise = noise.as_ref().map(|n| NoiseParams {
            dephasing_rates: vec![n.dephasing_rate; sys.num_spins()],
            pulse_angle_error: n.pulse_angle_error,
            pulse_angle_jitter: n.pulse_angle_jitter,
            seed: n.seed,
        });
        if let Some(nz) = &noise {
            lift(nz.validate(sys.num_spins()))?;
        }
        let run = lift(run_nmr(&params, sys, noise.as_ref()))?;
        let mut probabilities = [0.0; 4];
        probabilities.copy_from_slice(&run.outcome.distribution);
        *result = QcsNmrResult {
            fidelity: run.fidelity.c,
            overlap: run.fidelity.overlap,
            purity_ratio: run.fidelity.purity_ratio,
            prep_residual: run.prep.normalized_distance,
            j_peak: run.outcome.j_peak,
            probabilities,
        };
        if !final_state.is_null() {
            *final_state = Box::into_raw(Box::new(QcsDensityMatrix(run.rho_exp)));
        }
        Ok(())
    })
}

/// Matrix dimension, or 0 for a null handle.
///
/// # Safety
/// `rho` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcs_density_dim(rho: *const QcsDensityMatrix) -> usize {
    rho.as_ref().map_or(0, |r| r.0.dim())
}

/// Reads element `(row, col)`.
///
/// # Safety
/// `rho` must be a live handle; `re` and `im` writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_density_get(
    rho: *const QcsDensityMatrix,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> QcsStatus {
    guard(|| {
        let rho = &deref(rho, "density matrix")?.0;
        if re.is_null() || im.is_null() {
            return Err(null("output pointer"));
        }
        if row >= rho.dim() || col >= rho.dim() {
            return fail(QcsError::DimensionMismatch { expected: rho.dim(), actual: row.max(col) + 1 });
        }
        let v = rho.get(row, col);
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}

/// JSON dump `{"dim", "re", "im"}`; release with `qcs_string_free`.
///
/// # Safety
/// `rho` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_density_to_json(rho: *const QcsDensityMatrix, out: *mut *mut c_char) -> QcsStatus {
    guard(|| put_string(out, density_to_json(&deref(rho, "density matrix")?.0)))
}

/// # Safety
/// `rho` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn qcs_density_free(rho: *mut QcsDensityMatrix) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}
