//! C ABI over zerocount. Objects are opaque handles created and destroyed by
//! this library; every call returns a `ZcStatus` and writes results through
//! out-pointers. The message of the last failure on the calling thread is
//! available from `zc_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use zerocount::constants::{constants_for, ConstantSet};
use zerocount::quad::QuadratureSpec;
use zerocount::regions::BoundParams;
use zerocount::specfun::{g_of_t, rs_theta, rs_z, zeta_real, EvalAccuracy};
use zerocount::zeros::{find_zeros, ingest_zeros, n_exact, s_exact, write_zeros, ZeroList};
use zerocount::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidString = 2,
    Domain = 3,
    Accuracy = 4,
    Pole = 5,
    Range = 6,
    Constraint = 7,
    Quadrature = 8,
    NoCrossing = 9,
    Infeasible = 10,
    Completeness = 11,
    Coverage = 12,
    Parse = 13,
    Monotonicity = 14,
    Index = 15,
    Config = 16,
    Io = 17,
    Panic = 18,
}

/// Published parameter set with a chosen (c, r, eta).
pub struct ZcParams(BoundParams);

/// Strictly increasing list of zero ordinates.
pub struct ZcZeroList(ZeroList);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ZcConstantSet {
    pub c1: f64,
    pub c2: f64,
    pub c2p: f64,
    pub c3: f64,
    pub c3p: f64,
    pub c3t: f64,
    pub c3pt: f64,
}

impl From<ConstantSet> for ZcConstantSet {
    fn from(c: ConstantSet) -> Self {
        ZcConstantSet { c1: c.c1, c2: c.c2, c2p: c.c2p, c3: c.c3, c3p: c.c3p, c3t: c.c3t, c3pt: c.c3pt }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> ZcStatus {
    match e {
        Error::Domain(_) => ZcStatus::Domain,
        Error::Accuracy(_) => ZcStatus::Accuracy,
        Error::Pole => ZcStatus::Pole,
        Error::Range(_) => ZcStatus::Range,
        Error::Constraint(_) => ZcStatus::Constraint,
        Error::Quadrature(_) => ZcStatus::Quadrature,
        Error::NoCrossing(_) => ZcStatus::NoCrossing,
        Error::Infeasible(_) => ZcStatus::Infeasible,
        Error::Completeness(_) => ZcStatus::Completeness,
        Error::Coverage(_) => ZcStatus::Coverage,
        Error::Parse { .. } => ZcStatus::Parse,
        Error::Monotonicity(_) => ZcStatus::Monotonicity,
        Error::Index(_) => ZcStatus::Index,
        Error::Config(_) => ZcStatus::Config,
        Error::Io(_) => ZcStatus::Io,
    }
}

enum Fail {
    Null,
    Utf8,
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Fail> + UnwindSafe>(f: F) -> ZcStatus {
    match catch_unwind(f) {
        Ok(Ok(())) => ZcStatus::Ok,
        Ok(Err(Fail::Null)) => {
            set_error("null pointer argument".into());
            ZcStatus::NullPointer
        }
        Ok(Err(Fail::Utf8)) => {
            set_error("string argument is not valid UTF-8".into());
            ZcStatus::InvalidString
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            ZcStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null)
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null);
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Utf8)
}

/// Message of the most recent failure on this thread, or null. Release it with
/// `zc_string_free`.
#[no_mangle]
pub extern "C" fn zc_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        Some(m) => CString::new(m.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------- parameters

/// Creates the published instantiation (n = 5, J1 = 64, J2 = 39,
/// T0 = 30610046000) at (c, r, eta). Fails with `Constraint` if the point is
/// infeasible; nothing is allocated in that case.
///
/// # Safety
/// `out_params` must be a valid pointer to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn zc_params_new(c: f64, r: f64, eta: f64, out_params: *mut *mut ZcParams) -> ZcStatus {
    guard(move || {
        let slot = out(out_params)?;
        let p = BoundParams::published(c, r, eta);
        p.validate()?;
        *slot = Box::into_raw(Box::new(ZcParams(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from `zc_params_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zc_params_free(p: *mut ZcParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Assembles the seven constants at quadrature tolerance `abs_tol`.
///
/// # Safety
/// `p` must be a live handle and `out_set` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zc_constants(p: *const ZcParams, abs_tol: f64, out_set: *mut ZcConstantSet) -> ZcStatus {
    guard(move || {
        let params = &p.as_ref().ok_or(Fail::Null)?.0;
        let slot = out(out_set)?;
        let q = QuadratureSpec::new(abs_tol, QuadratureSpec::default().max_subdivisions)?;
        *slot = constants_for(params, &q)?.into();
        Ok(())
    })
}

/// The same seven values rounded up at the fifth decimal.
#[no_mangle]
pub extern "C" fn zc_constants_round_up(set: ZcConstantSet) -> ZcConstantSet {
    let cs = ConstantSet::from_array([set.c1, set.c2, set.c2p, set.c3, set.c3p, set.c3t, set.c3pt]);
    cs.rounded_up().into()
}

// ---------------------------------------------------------------- special functions

fn scalar(f: impl FnOnce() -> zerocount::Result<f64> + UnwindSafe, dst: *mut f64) -> ZcStatus {
    guard(move || {
        // SAFETY: the exported callers require `dst` to be null or valid
        let slot = unsafe { out(dst)? };
        *slot = f()?;
        Ok(())
    })
}

/// Riemann zeta on the real axis, sigma > 1.
///
/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zc_zeta_real(sigma: f64, out_value: *mut f64) -> ZcStatus {
    scalar(move || zeta_real(sigma, &EvalAccuracy::default()), out_value)
}

/// Hardy's Z(t), t >= 10.
///
/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zc_hardy_z(t: f64, out_value: *mut f64) -> ZcStatus {
    scalar(move || rs_z(t), out_value)
}

/// Riemann-Siegel theta(t).
///
/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zc_theta(t: f64, out_value: *mut f64) -> ZcStatus {
    scalar(move || rs_theta(t), out_value)
}

/// g(T), the Stirling remainder in the counting formula.
///
/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zc_g(t: f64, out_value: *mut f64) -> ZcStatus {
    scalar(move || g_of_t(t), out_value)
}

// ---------------------------------------------------------------- zeros

/// Computes and verifies all zeros up to `t_max` (15 <= t_max <= 1e6).
///
/// # Safety
/// `out_list` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zc_zeros_find(t_max: f64, out_list: *mut *mut ZcZeroList) -> ZcStatus {
    guard(move || {
        let slot = out(out_list)?;
        *slot = Box::into_raw(Box::new(ZcZeroList(find_zeros(t_max)?)));
        Ok(())
    })
}

/// Reads a zero file (one ordinate per line, '#' comments).
///
/// # Safety
/// `path` must be a NUL-terminated string and `out_list` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zc_zeros_ingest(path: *const c_char, out_list: *mut *mut ZcZeroList) -> ZcStatus {
    guard(move || {
        let path = text(path)?;
        let slot = out(out_list)?;
        *slot = Box::into_raw(Box::new(ZcZeroList(ingest_zeros(path)?)));
        Ok(())
    })
}

/// # Safety
/// `z` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn zc_zeros_write(z: *const ZcZeroList, path: *const c_char) -> ZcStatus {
    guard(move || {
        let z = &z.as_ref().ok_or(Fail::Null)?.0;
        write_zeros(z, text(path)?)?;
        Ok(())
    })
}

/// # Safety
/// `z` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zc_zeros_len(z: *const ZcZeroList) -> usize {
    z.as_ref().map_or(0, |z| z.0.len())
}

/// # Safety
/// `z` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zc_zeros_coverage(z: *const ZcZeroList) -> f64 {
    z.as_ref().map_or(f64::NAN, |z| z.0.coverage())
}

/// The n-th ordinate, 1-based.
///
/// # Safety
/// `z` must be a live handle and `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zc_zeros_get(z: *const ZcZeroList, n: usize, out_value: *mut f64) -> ZcStatus {
    guard(move || {
        let z = &z.as_ref().ok_or(Fail::Null)?.0;
        *out(out_value)? = z.nth(n)?;
        Ok(())
    })
}

/// # Safety
/// `z` must be a live handle and `out_count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zc_n_exact(z: *const ZcZeroList, t: f64, out_count: *mut usize) -> ZcStatus {
    guard(move || {
        let z = &z.as_ref().ok_or(Fail::Null)?.0;
        *out(out_count)? = n_exact(t, z)?;
        Ok(())
    })
}

/// # Safety
/// `z` must be a live handle and `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zc_s_exact(z: *const ZcZeroList, t: f64, out_value: *mut f64) -> ZcStatus {
    guard(move || {
        let z = &z.as_ref().ok_or(Fail::Null)?.0;
        *out(out_value)? = s_exact(t, z)?;
        Ok(())
    })
}

/// # Safety
/// `z` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zc_zeros_free(z: *mut ZcZeroList) {
    if !z.is_null() {
        drop(Box::from_raw(z));
    }
}
