//! C ABI over `lpoly-core`.
//!
//! Every function returns an [`LpolyStatus`]; results come back through out
//! pointers. On failure the message is available from [`lpoly_last_error`]
//! on the same thread. Strings returned by the library are released with
//! [`lpoly_string_free`], handles with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lpoly_core::char_sums::{PolySpec, SumEngine};
use lpoly_core::cli::session::{JobSpec, Session};
use lpoly_core::polygon::{hodge, NewtonPolygon};
use lpoly_core::strat::{
    gnp_power, gnp_twisted, hasse_full_eval, hasse_twisted_eval, hs_power, hs_twisted, DEFAULT_SIGMA_CAP,
};
use lpoly_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpolyStatus {
    Ok = 0,
    /// invalid or inconsistent parameters
    BadParameters = 1,
    /// an enumeration or permutation bound was hit
    Bound = 2,
    /// an internal consistency check failed
    Internal = 3,
    NullPointer = 4,
    Panic = 5,
}

/// Newton polygon handle.
pub struct LpolyPolygon(NewtonPolygon);

/// Character-sum engine with its per-field caches.
pub struct LpolyEngine(Session);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> LpolyStatus {
    match e.exit_code() {
        3 => LpolyStatus::Bound,
        4 => LpolyStatus::Internal,
        _ => LpolyStatus::BadParameters,
    }
}

fn guard<F: FnOnce() -> Result<(), LpolyStatus>>(f: F) -> LpolyStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LpolyStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside lpoly".into());
            LpolyStatus::Panic
        }
    }
}

fn check<T>(r: lpoly_core::Result<T>) -> Result<T, LpolyStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), LpolyStatus> {
    if p.is_null() {
        set_error(format!("{name} is null"));
        return Err(LpolyStatus::NullPointer);
    }
    Ok(())
}

unsafe fn put_polygon(out: *mut *mut LpolyPolygon, np: lpoly_core::Result<NewtonPolygon>) -> Result<(), LpolyStatus> {
    non_null(out, "out")?;
    let np = check(np)?;
    *out = Box::into_raw(Box::new(LpolyPolygon(np)));
    Ok(())
}

unsafe fn codes<'a>(coeffs: *const u64, n: usize) -> Result<&'a [u64], LpolyStatus> {
    if n == 0 {
        return Ok(&[]);
    }
    non_null(coeffs, "coeffs")?;
    Ok(std::slice::from_raw_parts(coeffs, n))
}

/// Message of the last failure on this thread; empty if none. Owned by the
/// library and valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn lpoly_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn lpoly_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lpoly_hs_twisted(d: u64, e: u64, r: u64, kappa: u64, out: *mut *mut LpolyPolygon) -> LpolyStatus {
    guard(|| put_polygon(out, hs_twisted(d, e, r, kappa)))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lpoly_gnp_twisted(p: u64, d: u64, e: u64, kappa: u64, out: *mut *mut LpolyPolygon) -> LpolyStatus {
    guard(|| put_polygon(out, gnp_twisted(p, d, e, kappa)))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lpoly_hs_power(d: u64, e: u64, r: u64, out: *mut *mut LpolyPolygon) -> LpolyStatus {
    guard(|| put_polygon(out, hs_power(d, e, r)))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lpoly_gnp_power(p: u64, d: u64, e: u64, out: *mut *mut LpolyPolygon) -> LpolyStatus {
    guard(|| put_polygon(out, gnp_power(p, d, e)))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lpoly_hodge(n: u64, out: *mut *mut LpolyPolygon) -> LpolyStatus {
    guard(|| put_polygon(out, hodge(n)))
}

/// # Safety
/// `poly` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lpoly_polygon_free(poly: *mut LpolyPolygon) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// # Safety
/// `poly` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lpoly_polygon_length(poly: *const LpolyPolygon) -> u64 {
    poly.as_ref().map_or(0, |p| p.0.length())
}

/// `{"vertices": [[x, "a/b"], ...], "slopes": [["a/b", len], ...]}`.
///
/// # Safety
/// `poly` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lpoly_polygon_to_json(poly: *const LpolyPolygon, out: *mut *mut c_char) -> LpolyStatus {
    guard(|| {
        non_null(poly, "poly")?;
        non_null(out, "out")?;
        let s = serde_json::to_string(&(*poly).0.to_json()).expect("polygon serializes");
        *out = CString::new(s).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// Writes whether `upper` is on or above `lower` at every abscissa.
///
/// # Safety
/// Both handles must be live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lpoly_polygon_lies_above(
    upper: *const LpolyPolygon,
    lower: *const LpolyPolygon,
    out: *mut bool,
) -> LpolyStatus {
    guard(|| {
        non_null(upper, "upper")?;
        non_null(lower, "lower")?;
        non_null(out, "out")?;
        *out = check((*upper).0.lies_above(&(*lower).0))?;
        Ok(())
    })
}

/// # Safety
/// `a`, `b` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn lpoly_polygon_equal(a: *const LpolyPolygon, b: *const LpolyPolygon) -> bool {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => a.0 == b.0,
        _ => false,
    }
}

/// New engine enumerating fields of at most `max_enum` elements (0 for the
/// default). `precision` 0 picks the default working precision.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lpoly_engine_new(max_enum: u64, precision: u32, out: *mut *mut LpolyEngine) -> LpolyStatus {
    guard(|| {
        non_null(out, "out")?;
        let engine = if max_enum == 0 { SumEngine::default() } else { SumEngine::new(max_enum) };
        let session = Session { engine, cache: None, precision: (precision != 0).then_some(precision) };
        *out = Box::into_raw(Box::new(LpolyEngine(session)));
        Ok(())
    })
}

/// # Safety
/// `engine` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lpoly_engine_free(engine: *mut LpolyEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

fn job(p: u64, m: u32, d: u64, e: u64, kappa: u64) -> Result<JobSpec, LpolyStatus> {
    let job = JobSpec { p, m, d, e, kappa };
    check(job.validate())?;
    Ok(job)
}

fn poly_for(job: &JobSpec, codes: &[u64]) -> Result<PolySpec, LpolyStatus> {
    let poly = check(job.base().and_then(|b| PolySpec::from_encodings(&b, codes)))?;
    if poly.degree() != job.e {
        set_error(format!("{} coefficients give degree {}, e is {}", codes.len(), poly.degree(), job.e));
        return Err(LpolyStatus::BadParameters);
    }
    Ok(poly)
}

/// q-adic Newton polygon of `L(P, chi^kappa)` over `F_{p^m}`, where
/// `P = x^e + sum_{i<e} a_i x^i` with `a_1..a_{e-1}` given as `coeffs`
/// (encodings `sum c_j p^j`) and `chi` of order `d` pinned by the
/// lex-smallest generator.
///
/// # Safety
/// `engine` live; `coeffs` readable for `ncoeffs` values; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lpoly_twisted_newton_polygon(
    engine: *const LpolyEngine,
    p: u64,
    m: u32,
    d: u64,
    e: u64,
    kappa: u64,
    coeffs: *const u64,
    ncoeffs: usize,
    out: *mut *mut LpolyPolygon,
) -> LpolyStatus {
    guard(|| {
        non_null(engine, "engine")?;
        let s = &(*engine).0;
        let job = job(p, m, d, e, kappa)?;
        if kappa == 0 {
            set_error("kappa must be nonzero".into());
            return Err(LpolyStatus::BadParameters);
        }
        let poly = poly_for(&job, codes(coeffs, ncoeffs)?)?;
        let l = check(s.twisted_ls(&job, &[poly]))?;
        let ctx = check(s.twisted_context(&job))?;
        put_polygon(out, ctx.q_newton_polygon(&l[0], m))
    })
}

/// q-adic Newton polygon of `L(P(x^d))` over `F_{p^m}`.
///
/// # Safety
/// As for [`lpoly_twisted_newton_polygon`].
#[no_mangle]
pub unsafe extern "C" fn lpoly_power_newton_polygon(
    engine: *const LpolyEngine,
    p: u64,
    m: u32,
    d: u64,
    e: u64,
    coeffs: *const u64,
    ncoeffs: usize,
    out: *mut *mut LpolyPolygon,
) -> LpolyStatus {
    guard(|| {
        non_null(engine, "engine")?;
        let s = &(*engine).0;
        let job = job(p, m, d, e, 0)?;
        let poly = poly_for(&job, codes(coeffs, ncoeffs)?)?;
        let l = check(s.power_ls(&job, &[poly]))?;
        let ctx = check(s.power_context(&job))?;
        put_polygon(out, ctx.q_newton_polygon(&l[0], m))
    })
}

/// Hasse polynomial evaluated at the coefficients of `P`: the product over
/// `n = 1..e` of the twisted factors when `kappa >= 1`, the full product for
/// `P(x^d)` when `kappa = 0`. Writes the value's encoding to `value`.
///
/// # Safety
/// `coeffs` readable for `ncoeffs` values; `value` writable.
#[no_mangle]
pub unsafe extern "C" fn lpoly_hasse_eval(
    p: u64,
    m: u32,
    d: u64,
    e: u64,
    kappa: u64,
    coeffs: *const u64,
    ncoeffs: usize,
    value: *mut u64,
) -> LpolyStatus {
    guard(|| {
        non_null(value, "value")?;
        let job = job(p, m, d, e, kappa)?;
        let poly = poly_for(&job, codes(coeffs, ncoeffs)?)?;
        let base = check(job.base())?;
        let h = if kappa == 0 {
            check(hasse_full_eval(&poly, d, DEFAULT_SIGMA_CAP))?
        } else {
            let mut h = base.one();
            for n in 1..=e as usize {
                h = base.mul(&h, &check(hasse_twisted_eval(&poly, d, kappa, n, DEFAULT_SIGMA_CAP))?);
            }
            h
        };
        *value = base.encode(&h);
        Ok(())
    })
}

/// Copies the last error into `buf` (NUL-terminated, truncated to `len`);
/// returns the full message length.
///
/// # Safety
/// `buf` writable for `len` bytes, or null with `len = 0`.
#[no_mangle]
pub unsafe extern "C" fn lpoly_last_error_copy(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

#[doc(hidden)]
pub fn last_error_string() -> String {
    unsafe { CStr::from_ptr(lpoly_last_error()) }.to_string_lossy().into_owned()
}
