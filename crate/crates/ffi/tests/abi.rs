use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use lefschetz_ffi::*;

const E1: &str = "fibration \"E1\" {\n  fiber_genus 1\n  base_genus 0\n  curve a nonsep (1,0)\n  curve b nonsep (0,1)\n  word a b a b a b a b a b a b\n}\n";

fn parse(text: &str) -> (LfStatus, *mut LfFactorization) {
    let c = CString::new(text).unwrap();
    let mut h = ptr::null_mut();
    let st = unsafe { lf_parse(c.as_ptr(), &mut h) };
    (st, h)
}

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { lf_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(lf_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn elliptic_round_trip() {
    let (st, h) = parse(E1);
    assert_eq!(st, LfStatus::Ok);
    let (mut l, mut n, mut s) = (0, 0, 0);
    assert_eq!(unsafe { lf_counts(h, &mut l, &mut n, &mut s) }, LfStatus::Ok);
    assert_eq!((l, n, s), (12, 12, 0));
    let mut v = LfClosure::Violated;
    assert_eq!(unsafe { lf_closure(h, &mut v) }, LfStatus::Ok);
    assert_eq!(v, LfClosure::Closed);
    let mut sigma = 0i64;
    assert_eq!(unsafe { lf_signature(h, &mut sigma) }, LfStatus::Ok);
    assert_eq!(sigma, -8);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { lf_invariants_json(h, &mut json) }, LfStatus::Ok);
    let report: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(report["b2"], 10);

    let mut text = ptr::null_mut();
    assert_eq!(unsafe { lf_serialize(h, LfFormat::Json, &mut text) }, LfStatus::Ok);
    let (st2, h2) = parse(&take(text));
    assert_eq!(st2, LfStatus::Ok);
    unsafe {
        lf_factorization_free(h2);
        lf_factorization_free(h);
    }
}

#[test]
fn checks_report_failures() {
    let (_, h) = parse("fibration \"s\" {\n fiber_genus 2\n base_genus 0\n curve c sep 1\n word c c\n}\n");
    let mut out = ptr::null_mut();
    let mut failed: c_int = 0;
    let suite = CString::new("p41").unwrap();
    assert_eq!(
        unsafe { lf_check_json(h, suite.as_ptr(), &mut out, &mut failed) },
        LfStatus::Ok
    );
    assert_eq!(failed, 1);
    assert!(take(out).contains("\"p41\""));
    let bad = CString::new("nope").unwrap();
    assert_eq!(
        unsafe { lf_check_json(h, bad.as_ptr(), &mut out, &mut failed) },
        LfStatus::InvalidArgument
    );
    unsafe { lf_factorization_free(h) };
}

#[test]
fn errors_are_reported() {
    let (st, h) = parse("fibration \"x\" {\n fiber_genus 1\n base_genus 0\n word a\n}\n");
    assert_eq!(st, LfStatus::ParseError);
    assert!(h.is_null());
    assert!(last_error().contains("undeclared curve 'a'"), "{}", last_error());

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { lf_parse(ptr::null(), &mut out) }, LfStatus::NullPointer);
    let mut sigma = 0i64;
    assert_eq!(unsafe { lf_signature(ptr::null(), &mut sigma) }, LfStatus::NullPointer);

    let (_, open) = parse("fibration \"o\" {\n fiber_genus 1\n base_genus 0\n curve a nonsep (1,0)\n word a\n}\n");
    assert_eq!(unsafe { lf_signature(open, &mut sigma) }, LfStatus::Precondition);
    assert!(!last_error().is_empty());
    unsafe { lf_factorization_free(open) };

    let invalid = [0xffu8, 0];
    assert_eq!(
        unsafe { lf_parse(invalid.as_ptr().cast(), &mut out) },
        LfStatus::InvalidUtf8
    );
}

#[test]
fn catalog_and_version() {
    let name = CString::new("E1").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { lf_catalog_export(name.as_ptr(), &mut out) }, LfStatus::Ok);
    assert_eq!(take(out), lefschetz::catalog::lookup("E1").unwrap().source);
    let missing = CString::new("E99").unwrap();
    assert_eq!(
        unsafe { lf_catalog_export(missing.as_ptr(), &mut out) },
        LfStatus::NotFound
    );
    let v = unsafe { CStr::from_ptr(lf_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/lefschetz.h");
    for f in [
        "lf_parse",
        "lf_factorization_free",
        "lf_counts",
        "lf_closure",
        "lf_signature",
        "lf_invariants_json",
        "lf_check_json",
        "lf_serialize",
        "lf_catalog_export",
        "lf_string_free",
        "lf_last_error",
        "lf_version",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct LfFactorization LfFactorization;"));
}
