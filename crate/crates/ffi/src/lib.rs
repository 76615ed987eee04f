//! C ABI over the `lefschetz` library.
//!
//! Factorizations are opaque handles created by [`lf_parse`] and released
//! with [`lf_factorization_free`]. Every fallible call returns an
//! [`LfStatus`]; on failure [`lf_last_error`] describes what went wrong on
//! the calling thread. Strings handed out by the library are owned by the
//! caller and must be released with [`lf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use lefschetz::catalog::lookup;
use lefschetz::checks::{any_failure, run_report_checks, Selection};
use lefschetz::fibration::{counts, verify_closure, ClosureVerdict, Factorization};
use lefschetz::format::{self, Format};
use lefschetz::invariants::compute_report;
use lefschetz::meyer::{calibrate, sigma_over_sphere};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    /// The operation needs a closed word over the sphere, or calibration failed.
    Precondition = 4,
    NotFound = 5,
    InvalidArgument = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LfClosure {
    Closed = 0,
    ClosedUpToCommutators = 1,
    Unverified = 2,
    Violated = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LfFormat {
    Dsl = 0,
    Json = 1,
}

/// Opaque handle to a parsed factorization.
pub struct LfFactorization {
    inner: Factorization,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let mut bytes = msg.into().into_bytes();
    bytes.retain(|&b| b != 0);
    let c = CString::new(bytes).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

type FfiResult = Result<(), LfStatus>;

fn fail(status: LfStatus, msg: impl Into<String>) -> LfStatus {
    set_error(msg);
    status
}

/// Runs `body`, turning panics into [`LfStatus::Panic`].
fn guard(body: impl FnOnce() -> FfiResult) -> LfStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => LfStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(LfStatus::Panic, "internal panic"),
    }
}

unsafe fn text_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, LfStatus> {
    if p.is_null() {
        return Err(fail(LfStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(LfStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a>(p: *const LfFactorization) -> Result<&'a Factorization, LfStatus> {
    p.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| fail(LfStatus::NullPointer, "factorization handle is null"))
}

unsafe fn put<T>(out: *mut T, value: T) -> FfiResult {
    if out.is_null() {
        return Err(fail(LfStatus::NullPointer, "output pointer is null"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> FfiResult {
    let c = CString::new(s).map_err(|_| fail(LfStatus::Panic, "string contains a nul byte"))?;
    put(out, c.into_raw())
}

fn closed_report(f: &Factorization) -> Result<lefschetz::invariants::InvariantReport, LfStatus> {
    calibrate().map_err(|e| fail(LfStatus::Precondition, e.to_string()))?;
    compute_report(f).map_err(|e| fail(LfStatus::Precondition, e.to_string()))
}

/// Parses a DSL or JSON document into a new handle.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_parse(text: *const c_char, out: *mut *mut LfFactorization) -> LfStatus {
    guard(|| {
        let text = text_arg(text, "text")?;
        if out.is_null() {
            return Err(fail(LfStatus::NullPointer, "output pointer is null"));
        }
        let f = format::parse_str(text).map_err(|diags| {
            let msgs: Vec<String> = diags.iter().map(ToString::to_string).collect();
            fail(LfStatus::ParseError, msgs.join("\n"))
        })?;
        put(out, Box::into_raw(Box::new(LfFactorization { inner: f })))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `f` must come from [`lf_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lf_factorization_free(f: *mut LfFactorization) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Singular fiber counts `l = n + s`.
///
/// # Safety
/// `f` must be a live handle; the outputs must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn lf_counts(f: *const LfFactorization, l: *mut usize, n: *mut usize, s: *mut usize) -> LfStatus {
    guard(|| {
        let c = counts(handle(f)?);
        put(l, c.l)?;
        put(n, c.n)?;
        put(s, c.s)
    })
}

/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_closure(f: *const LfFactorization, out: *mut LfClosure) -> LfStatus {
    guard(|| {
        let v = match verify_closure(handle(f)?) {
            ClosureVerdict::Closed => LfClosure::Closed,
            ClosureVerdict::ClosedUpToCommutators => LfClosure::ClosedUpToCommutators,
            ClosureVerdict::Unverified => LfClosure::Unverified,
            ClosureVerdict::Violated => LfClosure::Violated,
        };
        put(out, v)
    })
}

/// Signature of the total space; needs a closed word over the sphere.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_signature(f: *const LfFactorization, out: *mut i64) -> LfStatus {
    guard(|| {
        let f = handle(f)?;
        calibrate().map_err(|e| fail(LfStatus::Precondition, e.to_string()))?;
        let b = sigma_over_sphere(f).map_err(|e| fail(LfStatus::Precondition, e.to_string()))?;
        put(out, b.total)
    })
}

/// The invariant report as JSON; free the result with [`lf_string_free`].
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_invariants_json(f: *const LfFactorization, out: *mut *mut c_char) -> LfStatus {
    guard(|| {
        let r = closed_report(handle(f)?)?;
        put_string(out, serde_json::to_string_pretty(&r).expect("serializable"))
    })
}

/// Runs the checks (`suite` may be null for all) with the handle's flags.
/// `any_failed` is set to 1 when an applicable non-informational check fails.
///
/// # Safety
/// `f` must be a live handle; `suite` null or a nul-terminated string;
/// `out` and `any_failed` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn lf_check_json(
    f: *const LfFactorization,
    suite: *const c_char,
    out: *mut *mut c_char,
    any_failed: *mut c_int,
) -> LfStatus {
    guard(|| {
        let f = handle(f)?;
        let selection: Selection = if suite.is_null() {
            Selection::All
        } else {
            text_arg(suite, "suite")?
                .parse()
                .map_err(|e: String| fail(LfStatus::InvalidArgument, e))?
        };
        let r = closed_report(f)?;
        let results = run_report_checks(&r, f.fiber_genus().get(), f.flags(), &selection)
            .map_err(|e| fail(LfStatus::Precondition, e.to_string()))?;
        put(any_failed, c_int::from(any_failure(&results)))?;
        put_string(out, serde_json::to_string_pretty(&results).expect("serializable"))
    })
}

/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_serialize(f: *const LfFactorization, fmt: LfFormat, out: *mut *mut c_char) -> LfStatus {
    guard(|| {
        let fmt = match fmt {
            LfFormat::Dsl => Format::Dsl,
            LfFormat::Json => Format::Json,
        };
        put_string(out, format::serialize(handle(f)?, fmt))
    })
}

/// The embedded document of a catalog entry, byte for byte.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_catalog_export(name: *const c_char, out: *mut *mut c_char) -> LfStatus {
    guard(|| {
        let name = text_arg(name, "name")?;
        let e = lookup(name).map_err(|e| fail(LfStatus::NotFound, e.to_string()))?;
        put_string(out, e.source.to_string())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn lf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn lf_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
