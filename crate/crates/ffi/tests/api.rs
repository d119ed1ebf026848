//! The C ABI exercised from Rust, as a C caller would use it.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use mualg_ffi::*;

const M1: &str = "states: s0 s1\nrel a: s0->s1 s1->s1\nval p: s1\n";

fn owned(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { mualg_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(mualg_last_error()) }
        .to_str()
        .unwrap()
        .to_string()
}

fn parse(src: &str) -> *mut MualgTerm {
    let src = CString::new(src).unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe { mualg_term_parse(src.as_ptr(), &mut t) },
        MualgStatus::Ok
    );
    t
}

#[test]
fn terms_round_trip() {
    let t = parse("~(p & <a>q)");
    let n = unsafe { mualg_term_nnf(t) };
    assert_eq!(owned(unsafe { mualg_term_print(n) }), "~p | [a]~q");
    assert_eq!(unsafe { mualg_term_fragment(n) }, 0);
    let nu = parse("nu y . [a]y");
    assert_eq!(unsafe { mualg_term_fragment(nu) }, 1);
    unsafe {
        mualg_term_free(nu);
        mualg_term_free(n);
        mualg_term_free(t);
    }
}

#[test]
fn evaluation() {
    let src = CString::new(M1).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { mualg_model_parse(src.as_ptr(), &mut m) },
        MualgStatus::Ok
    );
    assert_eq!(unsafe { mualg_model_states(m) }, 2);
    let t = parse("mu x . p | <a>x");
    let mut mask = 0;
    assert_eq!(unsafe { mualg_eval(m, t, &mut mask) }, MualgStatus::Ok);
    assert_eq!(mask, 0b11);
    unsafe {
        mualg_term_free(t);
        mualg_model_free(m);
    }
}

#[test]
fn errors_are_reported() {
    let bad = CString::new("p &").unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe { mualg_term_parse(bad.as_ptr(), &mut t) },
        MualgStatus::ParseError
    );
    assert!(t.is_null());
    assert!(last_error().contains("offset"));
    assert_eq!(
        unsafe { mualg_term_parse(ptr::null(), &mut t) },
        MualgStatus::NullPointer
    );
    let mut mask = 0;
    assert_eq!(
        unsafe { mualg_eval(ptr::null(), ptr::null(), &mut mask) },
        MualgStatus::NullPointer
    );
    let invalid = [0xffu8, 0];
    assert_eq!(
        unsafe { mualg_term_parse(invalid.as_ptr().cast(), &mut t) },
        MualgStatus::InvalidUtf8
    );
    unsafe {
        mualg_term_free(ptr::null_mut());
        mualg_model_free(ptr::null_mut());
        mualg_string_free(ptr::null_mut());
    }
    assert_eq!(unsafe { mualg_term_fragment(ptr::null()) }, -1);
}

#[test]
fn suites() {
    let name = CString::new("counterexample").unwrap();
    let mut passed = false;
    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { mualg_suite_run(name.as_ptr(), 1, 10, &mut passed, &mut report) },
        MualgStatus::Ok
    );
    assert!(passed);
    assert!(owned(report).starts_with("suite counterexample"));
    let name = CString::new("nonexistent").unwrap();
    assert_eq!(
        unsafe { mualg_suite_run(name.as_ptr(), 1, 0, &mut passed, ptr::null_mut()) },
        MualgStatus::UnknownSuite
    );
    assert!(last_error().contains("nonexistent"));
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(mualg_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
