// SPDX-License-Identifier: Apache-2.0

//! C ABI over the `fitcut` cut search.
//!
//! Circuits, pools and plans cross the boundary as opaque handles that are
//! released with the matching `*_free`. Every fallible call returns a
//! [`FitcutStatus`]; on failure a message is kept per thread and can be read
//! with [`fitcut_last_error`]. Strings handed out by the library must be
//! released with [`fitcut_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fitcut::{Circuit, CutPlan, Error, WorkerPool};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitcutStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidCircuit = 4,
    InvalidPool = 5,
    InvalidArgument = 6,
    Unschedulable = 7,
    Panic = 8,
}

pub struct FitcutCircuit(Circuit);

pub struct FitcutPool(WorkerPool);

pub struct FitcutPlan(CutPlan);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("nul bytes removed")));
}

fn status_of(err: &Error) -> FitcutStatus {
    match err {
        Error::Syntax { .. } | Error::QubitOutOfRange { .. } | Error::RepeatedQubit { .. } => FitcutStatus::Parse,
        Error::InvalidCircuit(_) | Error::MissingGate(_) => FitcutStatus::InvalidCircuit,
        Error::InvalidPool(_) => FitcutStatus::InvalidPool,
        Error::Unschedulable { .. } => FitcutStatus::Unschedulable,
        _ => FitcutStatus::InvalidArgument,
    }
}

/// Runs `f`, recording its error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), (FitcutStatus, String)>) -> FitcutStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FitcutStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FitcutStatus::Panic
        }
    }
}

fn core_err(err: Error) -> (FitcutStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (FitcutStatus, String) {
    (FitcutStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (FitcutStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (FitcutStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), (FitcutStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fitcut_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fitcut_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a circuit in the text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fitcut_circuit_parse(text: *const c_char, out: *mut *mut FitcutCircuit) -> FitcutStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let c = Circuit::parse(text).map_err(core_err)?;
        put(out, FitcutCircuit(c))
    })
}

/// Bernstein-Vazirani on `qubits` qubits. `secret` is `ones`, `zeros` or a
/// bitstring; null means `ones`.
///
/// # Safety
/// `secret` must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fitcut_circuit_bv(
    qubits: usize,
    secret: *const c_char,
    out: *mut *mut FitcutCircuit,
) -> FitcutStatus {
    guard(|| {
        let secret = if secret.is_null() {
            "ones"
        } else {
            read_str(secret, "secret")?
        };
        let bits = fitcut::parse_secret(secret, qubits).map_err(core_err)?;
        let c = fitcut::gen_bv(qubits, &bits).map_err(core_err)?;
        put(out, FitcutCircuit(c))
    })
}

/// Ripple-carry adder on an even number of qubits.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fitcut_circuit_adder(qubits: usize, out: *mut *mut FitcutCircuit) -> FitcutStatus {
    guard(|| put(out, FitcutCircuit(fitcut::gen_adder(qubits).map_err(core_err)?)))
}

/// Hardware-efficient ansatz with `layers` entangling layers.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fitcut_circuit_hwea(
    qubits: usize,
    layers: usize,
    out: *mut *mut FitcutCircuit,
) -> FitcutStatus {
    guard(|| put(out, FitcutCircuit(fitcut::gen_hwea(qubits, layers).map_err(core_err)?)))
}

/// Seeded `rows x cols` supremacy-style random circuit.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fitcut_circuit_supremacy(
    rows: usize,
    cols: usize,
    depth: usize,
    seed: u64,
    out: *mut *mut FitcutCircuit,
) -> FitcutStatus {
    guard(|| {
        put(
            out,
            FitcutCircuit(fitcut::gen_supremacy(rows, cols, depth, seed).map_err(core_err)?),
        )
    })
}

/// Number of qubits, or 0 for a null handle.
///
/// # Safety
/// `circuit` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fitcut_circuit_num_qubits(circuit: *const FitcutCircuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.0.num_qubits())
}

/// Number of two-qubit gates, or 0 for a null handle.
///
/// # Safety
/// `circuit` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fitcut_circuit_two_qubit_count(circuit: *const FitcutCircuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.0.two_qubit_count())
}

/// The circuit in the text format, to be released with
/// [`fitcut_string_free`].
///
/// # Safety
/// `circuit` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fitcut_circuit_to_text(circuit: *const FitcutCircuit, out: *mut *mut c_char) -> FitcutStatus {
    guard(|| {
        let c = circuit.as_ref().ok_or_else(|| null("circuit"))?;
        put_string(out, c.0.to_text())
    })
}

/// # Safety
/// `circuit` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fitcut_circuit_free(circuit: *mut FitcutCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// Worker pool from JSON: a list of `{"id", "capacity"}` objects or an
/// object with a `workers` list.
///
/// # Safety
/// `json` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fitcut_pool_from_json(json: *const c_char, out: *mut *mut FitcutPool) -> FitcutStatus {
    guard(|| {
        let json = read_str(json, "json")?;
        put(out, FitcutPool(WorkerPool::from_json(json).map_err(core_err)?))
    })
}

/// Worker pool named `W1..Wn` from `len` capacities.
///
/// # Safety
/// `capacities` must point to `len` readable values and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn fitcut_pool_from_capacities(
    capacities: *const u32,
    len: usize,
    out: *mut *mut FitcutPool,
) -> FitcutStatus {
    guard(|| {
        if capacities.is_null() && len > 0 {
            return Err(null("capacities"));
        }
        let caps = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(capacities, len)
        };
        put(out, FitcutPool(WorkerPool::from_capacities(caps).map_err(core_err)?))
    })
}

/// # Safety
/// `pool` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fitcut_pool_free(pool: *mut FitcutPool) {
    if !pool.is_null() {
        drop(Box::from_raw(pool));
    }
}

/// Runs the cut search for seeds `seed..seed + runs` on up to `jobs`
/// threads (0 means one) and keeps the best plan.
///
/// # Safety
/// `circuit` and `pool` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fitcut_cut(
    circuit: *const FitcutCircuit,
    pool: *const FitcutPool,
    seed: u64,
    runs: usize,
    jobs: usize,
    out: *mut *mut FitcutPlan,
) -> FitcutStatus {
    guard(|| {
        let c = circuit.as_ref().ok_or_else(|| null("circuit"))?;
        let p = pool.as_ref().ok_or_else(|| null("pool"))?;
        if runs == 0 {
            return Err((FitcutStatus::InvalidArgument, "runs must be at least 1".into()));
        }
        let multi = fitcut::run_many(&c.0, &p.0, seed, runs, jobs.max(1)).map_err(core_err)?;
        put(out, FitcutPlan(multi.best))
    })
}

/// Number of wire cuts in the plan, or -1 for a null handle.
///
/// # Safety
/// `plan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fitcut_plan_num_cuts(plan: *const FitcutPlan) -> i64 {
    plan.as_ref().map_or(-1, |p| p.0.objectives.nc)
}

/// Idle qubit slots of the plan's schedule, or 0 for a null handle.
///
/// # Safety
/// `plan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fitcut_plan_idle_qubits(plan: *const FitcutPlan) -> u64 {
    plan.as_ref().map_or(0, |p| p.0.objectives.ru)
}

/// Number of subcircuits, or 0 for a null handle.
///
/// # Safety
/// `plan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fitcut_plan_num_subcircuits(plan: *const FitcutPlan) -> usize {
    plan.as_ref().map_or(0, |p| p.0.subcircuits.len())
}

/// Copies up to `len` subcircuit widths into `widths` and returns the total
/// number of subcircuits.
///
/// # Safety
/// `plan` must be a live handle; `widths` must be null or point to `len`
/// writable values.
#[no_mangle]
pub unsafe extern "C" fn fitcut_plan_widths(plan: *const FitcutPlan, widths: *mut u32, len: usize) -> usize {
    let Some(p) = plan.as_ref() else { return 0 };
    if !widths.is_null() {
        for (i, s) in p.0.subcircuits.iter().take(len).enumerate() {
            *widths.add(i) = s.width;
        }
    }
    p.0.subcircuits.len()
}

/// The plan as JSON, to be released with [`fitcut_string_free`].
///
/// # Safety
/// `plan` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fitcut_plan_to_json(plan: *const FitcutPlan, out: *mut *mut c_char) -> FitcutStatus {
    guard(|| {
        let p = plan.as_ref().ok_or_else(|| null("plan"))?;
        put_string(out, p.0.to_json())
    })
}

/// # Safety
/// `plan` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fitcut_plan_free(plan: *mut FitcutPlan) {
    if !plan.is_null() {
        drop(Box::from_raw(plan));
    }
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fitcut_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), (FitcutStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| (FitcutStatus::InvalidArgument, "string contains NUL".to_string()))?;
    *out = c.into_raw();
    Ok(())
}
