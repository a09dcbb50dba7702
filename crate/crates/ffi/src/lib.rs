//! C ABI for `toricfan`.
//!
//! Fans are opaque `TfFan` handles created by [`tf_fan_from_json`] and
//! released with [`tf_fan_free`]. Every fallible call returns a
//! [`TfStatus`]; the message of the last failure on the calling thread is
//! available from [`tf_last_error_message`]. Strings returned through out
//! parameters must be released with [`tf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use toricfan::cli::{run_command, Command};
use toricfan::fanfile::parse_fan_str;
use toricfan::{pp, Error, Fan};

/// Opaque fan handle.
pub struct TfFan {
    fan: Fan,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    /// Cones overlap, contain a line or have the wrong length.
    InvalidFan = 4,
    /// The fan lacks a property the operation needs (complete, simplicial, ...).
    Precondition = 5,
    /// A check-style command ran and its check failed; the report is still returned.
    CheckFailed = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> TfStatus {
    match e {
        Error::Parse(_) => TfStatus::Parse,
        Error::NotAFan { .. } | Error::NotStronglyConvex { .. } | Error::DimensionMismatch(_) | Error::Overflow => {
            TfStatus::InvalidFan
        }
        _ => TfStatus::Precondition,
    }
}

fn fail(e: &Error) -> TfStatus {
    set_error(format!("{}: {e}", e.kind()));
    status_of(e)
}

fn guarded(f: impl FnOnce() -> TfStatus) -> TfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            TfStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, TfStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(TfStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        TfStatus::InvalidUtf8
    })
}

unsafe fn fan_ref<'a>(f: *const TfFan) -> Result<&'a Fan, TfStatus> {
    if f.is_null() {
        set_error("null fan handle");
        return Err(TfStatus::NullPointer);
    }
    Ok(&(*f).fan)
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Parses a fan file given as a JSON string. On success `*out` owns a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tf_fan_from_json(json: *const c_char, out: *mut *mut TfFan) -> TfStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return TfStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let text = tri!(read_str(json));
        match parse_fan_str(text) {
            Ok(fan) => {
                *out = Box::into_raw(Box::new(TfFan { fan }));
                TfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `fan` must come from [`tf_fan_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tf_fan_free(fan: *mut TfFan) {
    if !fan.is_null() {
        drop(Box::from_raw(fan));
    }
}

/// # Safety
/// `fan` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tf_fan_ambient_rank(fan: *const TfFan, out: *mut usize) -> TfStatus {
    guarded(|| {
        let f = tri!(fan_ref(fan));
        if out.is_null() {
            set_error("null output pointer");
            return TfStatus::NullPointer;
        }
        *out = f.ambient_rank();
        TfStatus::Ok
    })
}

/// Number of cones, including the zero cone.
///
/// # Safety
/// `fan` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tf_fan_cone_count(fan: *const TfFan, out: *mut usize) -> TfStatus {
    guarded(|| {
        let f = tri!(fan_ref(fan));
        if out.is_null() {
            set_error("null output pointer");
            return TfStatus::NullPointer;
        }
        *out = f.len();
        TfStatus::Ok
    })
}

/// # Safety
/// `fan` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tf_fan_is_complete(fan: *const TfFan, out: *mut bool) -> TfStatus {
    guarded(|| {
        let f = tri!(fan_ref(fan));
        if out.is_null() {
            set_error("null output pointer");
            return TfStatus::NullPointer;
        }
        *out = f.is_complete();
        TfStatus::Ok
    })
}

/// Writes the ranks of piecewise polynomials for degrees `0..=max_degree`
/// into `out`, which must hold `max_degree + 1` entries.
///
/// # Safety
/// `fan` must be a live handle and `out` must point to `out_len` writable values.
#[no_mangle]
pub unsafe extern "C" fn tf_fan_hilbert(
    fan: *const TfFan,
    max_degree: u32,
    out: *mut u64,
    out_len: usize,
) -> TfStatus {
    guarded(|| {
        let f = tri!(fan_ref(fan));
        if out.is_null() {
            set_error("null output pointer");
            return TfStatus::NullPointer;
        }
        let need = max_degree as usize + 1;
        if out_len < need {
            set_error(format!("buffer holds {out_len} values, need {need}"));
            return TfStatus::BufferTooSmall;
        }
        for (q, r) in pp::hilbert_function(f, max_degree).into_iter().enumerate() {
            *out.add(q) = r as u64;
        }
        TfStatus::Ok
    })
}

/// Runs a command given as JSON, e.g. `{"command":"hilbert","max_degree":3}`,
/// and stores the JSON report in `*out_json`. The report is also returned
/// when the status is `CheckFailed`.
///
/// # Safety
/// `fan` must be a live handle, `command` a NUL-terminated string and
/// `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tf_fan_run_command(
    fan: *const TfFan,
    command: *const c_char,
    out_json: *mut *mut c_char,
) -> TfStatus {
    guarded(|| {
        if out_json.is_null() {
            set_error("null output pointer");
            return TfStatus::NullPointer;
        }
        *out_json = ptr::null_mut();
        let f = tri!(fan_ref(fan));
        let text = tri!(read_str(command));
        let cmd = match Command::from_json(text) {
            Ok(c) => c,
            Err(e) => return fail(&e),
        };
        match run_command(f, &cmd) {
            Ok(outcome) => {
                let s = serde_json::to_string(&outcome.report).expect("reports serialize");
                *out_json = CString::new(s).expect("JSON has no NUL").into_raw();
                if outcome.exit_code == 0 {
                    TfStatus::Ok
                } else {
                    set_error("check failed");
                    TfStatus::CheckFailed
                }
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
