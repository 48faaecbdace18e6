//! C ABI for the set-complexity library.
//!
//! Conventions:
//!
//! * Every function returns a [`SetcxStatus`] code; results go out through
//!   pointer parameters. No function panics across the boundary
//!   (panics are caught and reported as `SETCX_STATUS_INTERNAL`).
//! * `SetcxStringSet` is an opaque accumulating handle: create, add
//!   '0'/'1' strings, run measures, free. Handles are not thread-safe;
//!   share nothing or lock externally.
//! * On any non-OK status, [`setcx_last_error_message`] returns a
//!   thread-local, NUL-terminated description valid until the next failing
//!   call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use setcx::bitstring::{BitString, EncodingMode};
use setcx::compression::CompressorSpec;
use setcx::dist::{calibrate, distance_matrix, ncd_raw};
use setcx::error::Error;
use setcx::graph::{graph_psi, Graph, PsiMode};
use setcx::measures::{psi, Kernel, Norm, StringSet};
use setcx::seed::seeded_rng;

/// Result code of every API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetcxStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// Arguments failed validation (details via the last-error message).
    InvalidArgument = 2,
    /// The set's distance range is degenerate; calibration is impossible.
    CalibrationFailed = 3,
    /// Unexpected internal failure.
    Internal = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> SetcxStatus {
    match err {
        Error::Calibration { .. } => SetcxStatus::CalibrationFailed,
        _ => SetcxStatus::InvalidArgument,
    }
}

fn fail(err: &Error) -> SetcxStatus {
    set_last_error(&err.to_string());
    status_of(err)
}

/// Runs a body with panic containment; panics become `Internal`.
fn guarded(body: impl FnOnce() -> SetcxStatus) -> SetcxStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("internal panic");
            SetcxStatus::Internal
        }
    }
}

/// Opaque collection of binary strings (see `setcx_string_set_*`).
pub struct SetcxStringSet {
    members: Vec<BitString>,
}

/// Message describing the most recent failure on this thread, or an empty
/// string. The pointer stays valid until the next failing call on the
/// same thread.
#[no_mangle]
pub extern "C" fn setcx_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// The library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn setcx_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Creates an empty string-set handle. Free with
/// [`setcx_string_set_free`].
#[no_mangle]
pub extern "C" fn setcx_string_set_new() -> *mut SetcxStringSet {
    Box::into_raw(Box::new(SetcxStringSet { members: Vec::new() }))
}

/// Frees a string-set handle; NULL is ignored.
///
/// # Safety
/// `set` must be a pointer returned by [`setcx_string_set_new`] that has
/// not already been freed.
#[no_mangle]
pub unsafe extern "C" fn setcx_string_set_free(set: *mut SetcxStringSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Appends a string given as a NUL-terminated sequence of '0'/'1'
/// characters.
///
/// # Safety
/// `set` must be a live handle from [`setcx_string_set_new`]; `bits`
/// must point to a NUL-terminated byte string.
#[no_mangle]
pub unsafe extern "C" fn setcx_string_set_add(
    set: *mut SetcxStringSet,
    bits: *const c_char,
) -> SetcxStatus {
    guarded(|| {
        let (set, bits) = match (set.as_mut(), bits.is_null()) {
            (Some(s), false) => (s, CStr::from_ptr(bits)),
            _ => {
                set_last_error("set and bits must be non-NULL");
                return SetcxStatus::NullPointer;
            }
        };
        let text = match bits.to_str() {
            Ok(t) => t,
            Err(_) => {
                set_last_error("bits is not valid UTF-8");
                return SetcxStatus::InvalidArgument;
            }
        };
        match BitString::from_01_str(text) {
            Ok(b) => {
                set.members.push(b);
                SetcxStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Number of strings currently in the set; 0 for NULL.
///
/// # Safety
/// `set` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn setcx_string_set_len(set: *const SetcxStringSet) -> usize {
    set.as_ref().map_or(0, |s| s.members.len())
}

/// Raw normalized compression distance between two '0'/'1' strings under
/// the default compression backend.
///
/// # Safety
/// `x` and `y` must be NUL-terminated byte strings; `out` must be a valid
/// write target.
#[no_mangle]
pub unsafe extern "C" fn setcx_ncd(
    x: *const c_char,
    y: *const c_char,
    out: *mut f64,
) -> SetcxStatus {
    guarded(|| {
        if x.is_null() || y.is_null() || out.is_null() {
            set_last_error("x, y and out must be non-NULL");
            return SetcxStatus::NullPointer;
        }
        let parse = |p: *const c_char| -> Result<BitString, SetcxStatus> {
            let text = CStr::from_ptr(p).to_str().map_err(|_| {
                set_last_error("input is not valid UTF-8");
                SetcxStatus::InvalidArgument
            })?;
            BitString::from_01_str(text).map_err(|e| fail(&e))
        };
        let (bx, by) = match (parse(x), parse(y)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let d = ncd_raw(&bx, &by, &CompressorSpec::default(), EncodingMode::Ascii01);
        ptr::write(out, d);
        SetcxStatus::Ok
    })
}

/// Set complexity of the accumulated strings (kernel `d(1−d)`, norm
/// `1/(N−1)`). With `calibrated` true, distances are calibrated from the
/// set itself using the given seed; otherwise raw distances clamped to
/// `[0, 1]` are used.
///
/// # Safety
/// `set` must be a live handle; `out` must be a valid write target.
#[no_mangle]
pub unsafe extern "C" fn setcx_set_psi(
    set: *const SetcxStringSet,
    seed: u64,
    calibrated: bool,
    out: *mut f64,
) -> SetcxStatus {
    guarded(|| {
        let (handle, out) = match (set.as_ref(), out.is_null()) {
            (Some(s), false) => (s, out),
            _ => {
                set_last_error("set and out must be non-NULL");
                return SetcxStatus::NullPointer;
            }
        };
        let built = match StringSet::new(
            handle.members.clone(),
            CompressorSpec::default(),
            EncodingMode::Ascii01,
        ) {
            Ok(s) => s,
            Err(e) => return fail(&e),
        };
        let cal = if calibrated {
            let mut rng = seeded_rng(seed);
            match calibrate(&built, &mut rng) {
                Ok(c) => Some(c),
                Err(e) => return fail(&e),
            }
        } else {
            None
        };
        let d = match distance_matrix(&built, cal.as_ref()) {
            Ok(d) => d,
            Err(e) => return fail(&e),
        };
        match psi(&built, &d, &Kernel::default(), Norm::Xi) {
            Ok(report) => {
                ptr::write(out, report.psi);
                SetcxStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Graph set complexity from a dense row-major `n × n` adjacency matrix
/// of 0/1 bytes. `mode` 0 selects the product normalization, 1 the
/// pair-max normalization.
///
/// # Safety
/// `adjacency` must point to `n * n` readable bytes; `out` must be a valid
/// write target.
#[no_mangle]
pub unsafe extern "C" fn setcx_graph_psi(
    adjacency: *const u8,
    n: usize,
    mode: u32,
    out: *mut f64,
) -> SetcxStatus {
    guarded(|| {
        if adjacency.is_null() || out.is_null() {
            set_last_error("adjacency and out must be non-NULL");
            return SetcxStatus::NullPointer;
        }
        let mode = match mode {
            0 => PsiMode::Product,
            1 => PsiMode::PairMax,
            other => {
                set_last_error(&format!(
                    "unknown mode {other} (0 = product, 1 = pairmax)"
                ));
                return SetcxStatus::InvalidArgument;
            }
        };
        let flat = std::slice::from_raw_parts(adjacency, n.saturating_mul(n));
        let rows: Vec<Vec<u8>> = flat.chunks(n).map(<[u8]>::to_vec).collect();
        let graph = match Graph::from_dense(rows) {
            Ok(g) => g,
            Err(e) => return fail(&e),
        };
        match graph_psi(&graph, mode) {
            Ok(v) => {
                ptr::write(out, v);
                SetcxStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}
