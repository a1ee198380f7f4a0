//! C ABI over `gamma-lab`. Every function returns a [`GlStatus`]; on failure the message is
//! available from [`gl_last_error_message`] until the next call on the same thread. Handles are
//! opaque and owned by the caller, who releases them with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gamma_lab::cli::{self, Settings};
use gamma_lab::geometry::{in_gamma, SymPoint};
use gamma_lab::tuple::AnyTuple;
use gamma_lab::{DenseOperator, Error};
use num_complex::Complex64;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Precondition = 4,
    Numerical = 5,
    Io = 6,
    Panic = 7,
}

/// Opaque dense operator.
pub struct GlOperator(DenseOperator);

/// Opaque operator tuple on either backend.
pub struct GlTuple(AnyTuple);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GlStatus {
    match e {
        Error::Parameter(_) | Error::NonFinite { .. } | Error::Budget { .. } => GlStatus::InvalidArgument,
        Error::Parse(_) => GlStatus::Parse,
        Error::Precondition(_) | Error::NotContraction { .. } | Error::NotPsd { .. } | Error::SpectralRadiusTooLarge { .. } | Error::SymbolicSqrtUnsupported(_) => GlStatus::Precondition,
        Error::Io(_) => GlStatus::Io,
        _ => GlStatus::Numerical,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (GlStatus, String)>) -> GlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GlStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            GlStatus::Panic
        }
    }
}

fn lib<T>(r: gamma_lab::Result<T>) -> Result<T, (GlStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn non_null<'a, T>(p: *const T, what: &str) -> Result<&'a T, (GlStatus, String)> {
    // SAFETY: the caller guarantees `p` is null or valid for reads for the duration of the call.
    unsafe { p.as_ref() }.ok_or_else(|| (GlStatus::NullPointer, format!("{what} is null")))
}

fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (GlStatus, String)> {
    // SAFETY: as in `non_null`, for writes.
    unsafe { p.as_mut() }.ok_or_else(|| (GlStatus::NullPointer, format!("{what} is null")))
}

fn complex_slice(data: *const f64, count: usize) -> Result<Vec<Complex64>, (GlStatus, String)> {
    if count == 0 {
        return Ok(Vec::new());
    }
    non_null(data, "data")?;
    // SAFETY: the caller guarantees `2 * count` readable doubles at `data`.
    let raw: &[f64] = unsafe { std::slice::from_raw_parts(data, 2 * count) };
    Ok(raw.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect())
}

fn c_str<'a>(s: *const c_char) -> Result<&'a str, (GlStatus, String)> {
    non_null(s, "string")?;
    // SAFETY: the caller guarantees a nul-terminated string.
    unsafe { CStr::from_ptr(s) }.to_str().map_err(|e| (GlStatus::InvalidArgument, format!("string is not UTF-8: {e}")))
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), (GlStatus, String)> {
    let o = out_ptr(out, "out")?;
    *o = CString::new(s).map_err(|e| (GlStatus::Numerical, e.to_string()))?.into_raw();
    Ok(())
}

fn report_json(o: cli::Outcome, command: &str, seed: u64, code: *mut i32, out: *mut *mut c_char) -> Result<(), (GlStatus, String)> {
    let c = out_ptr(code, "exit_code")?;
    *c = o.code;
    let text = lib(serde_json::to_string(&o.into_report_file(command, seed)).map_err(Error::from))?;
    give_string(text, out)
}

/// Message of the last failed call on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn gl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gl_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by `CString::into_raw` in `give_string`.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Builds a `rows × cols` operator from `rows·cols` row-major `(re, im)` pairs.
///
/// # Safety
/// `data` must hold `2·rows·cols` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_operator_new(rows: usize, cols: usize, data: *const f64, out: *mut *mut GlOperator) -> GlStatus {
    guard(|| {
        let o = out_ptr(out, "out")?;
        let count = rows.checked_mul(cols).ok_or((GlStatus::InvalidArgument, "dimension overflow".to_string()))?;
        let v = complex_slice(data, count)?;
        let rows_v: Vec<Vec<Complex64>> = v.chunks(cols.max(1)).map(<[_]>::to_vec).collect();
        let op = lib(DenseOperator::from_rows(&rows_v))?;
        if op.rows() != rows || op.cols() != cols {
            return Err((GlStatus::InvalidArgument, "dimensions must be positive".into()));
        }
        *o = Box::into_raw(Box::new(GlOperator(op)));
        Ok(())
    })
}

/// # Safety
/// `op` must be null or a live handle from [`gl_operator_new`].
#[no_mangle]
pub unsafe extern "C" fn gl_operator_free(op: *mut GlOperator) {
    if !op.is_null() {
        // SAFETY: produced by `Box::into_raw`.
        drop(unsafe { Box::from_raw(op) });
    }
}

const NUMERICAL_RADIUS_SAMPLES: usize = 256;

/// Which scalar functional [`gl_operator_measure`] computes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlMeasure {
    OperatorNorm = 0,
    SpectralRadius = 1,
    NumericalRadius = 2,
}

/// `which` is a [`GlMeasure`] value.
///
/// # Safety
/// `op` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_operator_measure(op: *const GlOperator, which: u32, out: *mut f64) -> GlStatus {
    guard(|| {
        let a = &non_null(op, "op")?.0;
        let o = out_ptr(out, "out")?;
        *o = match which {
            w if w == GlMeasure::OperatorNorm as u32 => a.operator_norm(),
            w if w == GlMeasure::SpectralRadius as u32 => lib(a.spectral_radius())?,
            w if w == GlMeasure::NumericalRadius as u32 => lib(a.numerical_radius(NUMERICAL_RADIUS_SAMPLES))?,
            w => return Err((GlStatus::InvalidArgument, format!("unknown measure {w}"))),
        };
        Ok(())
    })
}

/// Membership of the point with elementary symmetric coordinates `s` (`n` pairs).
///
/// # Safety
/// `s` must hold `2·n` doubles; `inside` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_in_gamma(n: usize, s: *const f64, tol: f64, inside: *mut bool) -> GlStatus {
    guard(|| {
        let o = out_ptr(inside, "inside")?;
        let p = lib(SymPoint::new(complex_slice(s, n)?))?;
        *o = lib(in_gamma(&p, tol))?.inside;
        Ok(())
    })
}

/// Parses a tuple file; commutation is checked at `tol`.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_tuple_from_json(json: *const c_char, tol: f64, out: *mut *mut GlTuple) -> GlStatus {
    guard(|| {
        let o = out_ptr(out, "out")?;
        let t = lib(AnyTuple::parse(c_str(json)?, tol))?;
        *o = Box::into_raw(Box::new(GlTuple(t)));
        Ok(())
    })
}

/// # Safety
/// `t` must be null or a live handle from [`gl_tuple_from_json`].
#[no_mangle]
pub unsafe extern "C" fn gl_tuple_free(t: *mut GlTuple) {
    if !t.is_null() {
        // SAFETY: produced by `Box::into_raw`.
        drop(unsafe { Box::from_raw(t) });
    }
}

/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_tuple_len(t: *const GlTuple, out: *mut usize) -> GlStatus {
    guard(|| {
        *out_ptr(out, "out")? = non_null(t, "tuple")?.0.n();
        Ok(())
    })
}

/// Runs the classifier batteries. Writes the CLI exit code (0 or 2) and a JSON report that the
/// caller frees with [`gl_string_free`].
///
/// # Safety
/// `t` must be a live handle; `exit_code` and `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_classify(t: *const GlTuple, tol: f64, seed: u64, exit_code: *mut i32, report: *mut *mut c_char) -> GlStatus {
    guard(|| {
        let t = &non_null(t, "tuple")?.0;
        let s = Settings { tol, seed, ..Settings::default() };
        report_json(lib(cli::classify(t, &s))?, "classify", seed, exit_code, report)
    })
}

/// Solves the fundamental equations; report as in [`gl_classify`].
///
/// # Safety
/// As for [`gl_classify`].
#[no_mangle]
pub unsafe extern "C" fn gl_fundamental(t: *const GlTuple, tol: f64, exit_code: *mut i32, report: *mut *mut c_char) -> GlStatus {
    guard(|| {
        let t = &non_null(t, "tuple")?.0;
        let s = Settings { tol, ..Settings::default() };
        report_json(lib(cli::fundamental(t, &s))?, "fundamental", 0, exit_code, report)
    })
}

/// Runs built-in scenario `which` (1 or 2); exit code 0 iff every check met its expectation.
///
/// # Safety
/// `exit_code` and `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_example(which: u8, exit_code: *mut i32, report: *mut *mut c_char) -> GlStatus {
    guard(|| report_json(lib(cli::example(which))?, "example", 0, exit_code, report))
}
