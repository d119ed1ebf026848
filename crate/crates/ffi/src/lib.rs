//! C ABI for the `mualg` workbench.
//!
//! Terms and models cross the boundary as opaque handles owned by the
//! caller and released with the matching `_free` function. Every fallible
//! call returns a [`MualgStatus`]; on failure [`mualg_last_error`] holds a
//! message for the calling thread. Strings returned to C are released with
//! [`mualg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mualg::formats::parse_model;
use mualg::kripke::{eval, Env, KripkeModel};
use mualg::suites::run_suite;
use mualg::syntax::{parse_term, print_term};
use mualg::term::{classify, nnf, Fragment, Term};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MualgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    EvalError = 4,
    UnknownSuite = 5,
    Panic = 6,
}

/// A parsed term.
pub struct MualgTerm(Term);

/// A finite Kripke model.
pub struct MualgModel(KripkeModel);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(status: MualgStatus, msg: impl Into<String>) -> MualgStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning panics into [`MualgStatus::Panic`].
fn guarded(f: impl FnOnce() -> MualgStatus) -> MualgStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(MualgStatus::Panic, "internal panic"))
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, MualgStatus> {
    if s.is_null() {
        return Err(fail(MualgStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(MualgStatus::InvalidUtf8, "string is not UTF-8"))
}

fn into_c(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failure on this thread, empty if none. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mualg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn mualg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mualg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `src` into a new term stored at `*out`.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mualg_term_parse(
    src: *const c_char,
    out: *mut *mut MualgTerm,
) -> MualgStatus {
    guarded(|| {
        if out.is_null() {
            return fail(MualgStatus::NullPointer, "null output pointer");
        }
        let src = match text(src) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match parse_term(src.trim()) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(MualgTerm(t)));
                MualgStatus::Ok
            }
            Err(e) => fail(MualgStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `t` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mualg_term_free(t: *mut MualgTerm) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Canonical text of `t`; null if `t` is null.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mualg_term_print(t: *const MualgTerm) -> *mut c_char {
    match t.as_ref() {
        Some(t) => into_c(print_term(&t.0)),
        None => ptr::null_mut(),
    }
}

/// Negation normal form of `t` as a new handle; null if `t` is null.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mualg_term_nnf(t: *const MualgTerm) -> *mut MualgTerm {
    match t.as_ref() {
        Some(t) => Box::into_raw(Box::new(MualgTerm(nnf(&t.0)))),
        None => ptr::null_mut(),
    }
}

/// Fixed-point fragment: 0 sigma1, 1 pi1, 2 compositions of both, 3 general,
/// -1 for a null handle.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mualg_term_fragment(t: *const MualgTerm) -> i32 {
    match t.as_ref().map(|t| classify(&t.0)) {
        Some(Fragment::Sigma1) => 0,
        Some(Fragment::Pi1) => 1,
        Some(Fragment::CompSigma1Pi1) => 2,
        Some(Fragment::General) => 3,
        None => -1,
    }
}

/// Parses a model document into a new handle at `*out`.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mualg_model_parse(
    src: *const c_char,
    out: *mut *mut MualgModel,
) -> MualgStatus {
    guarded(|| {
        if out.is_null() {
            return fail(MualgStatus::NullPointer, "null output pointer");
        }
        let src = match text(src) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match parse_model(src, None) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(MualgModel(m)));
                MualgStatus::Ok
            }
            Err(e) => fail(MualgStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `m` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mualg_model_free(m: *mut MualgModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of states, 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mualg_model_states(m: *const MualgModel) -> usize {
    m.as_ref().map_or(0, |m| m.0.len())
}

/// Denotation of a closed term as a bit mask of states (bit `i` is state `i`).
///
/// # Safety
/// `m` and `t` must be live handles and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mualg_eval(
    m: *const MualgModel,
    t: *const MualgTerm,
    out: *mut u64,
) -> MualgStatus {
    guarded(|| {
        let (Some(m), Some(t)) = (m.as_ref(), t.as_ref()) else {
            return fail(MualgStatus::NullPointer, "null handle");
        };
        if out.is_null() {
            return fail(MualgStatus::NullPointer, "null output pointer");
        }
        match eval(&m.0, &t.0, &Env::new()) {
            Ok(v) => {
                *out = v.0;
                MualgStatus::Ok
            }
            Err(e) => fail(MualgStatus::EvalError, e.to_string()),
        }
    })
}

/// Runs an acceptance suite. `budget` 0 selects the default. Sets
/// `*passed` and, if `report` is non-null, stores the report text there.
///
/// # Safety
/// `name` must be a NUL-terminated string, `passed` writable, and `report`
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn mualg_suite_run(
    name: *const c_char,
    seed: u64,
    budget: usize,
    passed: *mut bool,
    report: *mut *mut c_char,
) -> MualgStatus {
    guarded(|| {
        if passed.is_null() {
            return fail(MualgStatus::NullPointer, "null output pointer");
        }
        let name = match text(name) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match run_suite(name, seed, (budget > 0).then_some(budget)) {
            Ok(r) => {
                *passed = r.passed();
                if !report.is_null() {
                    *report = into_c(r.render());
                }
                MualgStatus::Ok
            }
            Err(e) => fail(MualgStatus::UnknownSuite, e.to_string()),
        }
    })
}
