//! C ABI over erfkit.
//!
//! Approximants live behind an opaque `ErfkitApproximant` handle built from a
//! JSON descriptor (the same shape `erfkit gen` echoes back). Every call
//! returns an `ErfkitStatus`; on failure `erfkit_last_error` holds a message
//! for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use erfkit::cli::{ApproximantDescriptor, ApproximantDocument};
use erfkit::oracle::erf_ref;
use erfkit::transition::{sweep, GridSpec, ReferenceGrid};
use erfkit::{Approximant, Error, PrecisionContext};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErfkitStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Usage = 3,
    Domain = 4,
    Range = 5,
    Numeric = 6,
    Parse = 7,
    BufferTooSmall = 8,
    Panic = 9,
    Internal = 10,
}

/// Opaque approximant handle.
pub struct ErfkitApproximant {
    desc: ApproximantDescriptor,
    approx: Arc<dyn Approximant>,
    ctx: PrecisionContext,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: ErfkitStatus, msg: impl Into<String>) -> ErfkitStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> ErfkitStatus {
    let status = match &e {
        Error::Usage(_) => ErfkitStatus::Usage,
        Error::Domain(_) => ErfkitStatus::Domain,
        Error::Range(_) => ErfkitStatus::Range,
        Error::Numeric(_) => ErfkitStatus::Numeric,
        Error::Json(_) => ErfkitStatus::Parse,
        _ => ErfkitStatus::Internal,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning panics into `Panic`.
fn guard(f: impl FnOnce() -> ErfkitStatus) -> ErfkitStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(ErfkitStatus::Panic, msg)
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, ErfkitStatus> {
    if p.is_null() {
        return Err(fail(ErfkitStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(ErfkitStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

/// Copies `s` plus a NUL into `buf`. `needed` (if non-null) receives the full size.
unsafe fn write_str(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> ErfkitStatus {
    let bytes = s.as_bytes();
    if !needed.is_null() {
        *needed = bytes.len() + 1;
    }
    if buf.is_null() || len < bytes.len() + 1 {
        return fail(ErfkitStatus::BufferTooSmall, format!("need {} bytes", bytes.len() + 1));
    }
    ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, bytes.len());
    *buf.add(bytes.len()) = 0;
    ErfkitStatus::Ok
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Library version, static NUL-terminated string.
#[no_mangle]
pub extern "C" fn erfkit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the last failure on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn erfkit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds an approximant from a JSON descriptor such as
/// `{"family":"spline","order":4,"digits":34,"transition":"auto"}`.
/// `x_max` bounds the knot table for the grid family; pass 0 for the default.
///
/// # Safety
/// `descriptor_json` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn erfkit_approximant_new(
    descriptor_json: *const c_char,
    x_max: f64,
    out: *mut *mut ErfkitApproximant,
) -> ErfkitStatus {
    guard(|| {
        if out.is_null() {
            return fail(ErfkitStatus::NullArgument, "out is null");
        }
        *out = ptr::null_mut();
        let text = tri!(str_arg(descriptor_json, "descriptor_json"));
        let desc: ApproximantDescriptor = match serde_json::from_str(text) {
            Ok(d) => d,
            Err(e) => return fail(ErfkitStatus::Parse, e.to_string()),
        };
        let x_max = if x_max > 0.0 { x_max } else { desc.auto_grid().0 };
        let ctx = tri!(desc.ctx().map_err(from_error));
        let approx = tri!(desc.build(x_max).map_err(from_error));
        *out = Box::into_raw(Box::new(ErfkitApproximant { desc, approx, ctx }));
        ErfkitStatus::Ok
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` must come from `erfkit_approximant_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn erfkit_approximant_free(h: *mut ErfkitApproximant) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

unsafe fn handle<'a>(h: *const ErfkitApproximant) -> Result<&'a ErfkitApproximant, ErfkitStatus> {
    h.as_ref().ok_or_else(|| fail(ErfkitStatus::NullArgument, "handle is null"))
}

/// Evaluates at a double, result rounded to double.
///
/// # Safety
/// `h` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn erfkit_eval(h: *const ErfkitApproximant, x: f64, out: *mut f64) -> ErfkitStatus {
    guard(|| {
        let h = tri!(handle(h));
        if out.is_null() {
            return fail(ErfkitStatus::NullArgument, "out is null");
        }
        if !x.is_finite() {
            return fail(ErfkitStatus::Domain, "x is not finite");
        }
        let v = tri!(h.approx.eval(&h.ctx.float(x), &h.ctx).map_err(from_error));
        *out = v.to_f64();
        ErfkitStatus::Ok
    })
}

/// Evaluates at a decimal string, writing the value at the handle's working digits.
///
/// # Safety
/// `h` live, `x` NUL-terminated, `buf` at least `len` bytes or null.
#[no_mangle]
pub unsafe extern "C" fn erfkit_eval_str(
    h: *const ErfkitApproximant,
    x: *const c_char,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> ErfkitStatus {
    guard(|| {
        let h = tri!(handle(h));
        let xs = tri!(str_arg(x, "x"));
        let x = tri!(h.ctx.parse(xs).map_err(from_error));
        let v = tri!(h.approx.eval(&x, &h.ctx).map_err(from_error));
        let s = v.to_string_radix(10, Some(h.ctx.working_digits() as usize));
        write_str(&s, buf, len, needed)
    })
}

/// JSON document of the closed form (same as `erfkit gen`).
///
/// # Safety
/// `h` live, `buf` at least `len` bytes or null.
#[no_mangle]
pub unsafe extern "C" fn erfkit_approximant_document(
    h: *const ErfkitApproximant,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> ErfkitStatus {
    guard(|| {
        let h = tri!(handle(h));
        let doc = tri!(ApproximantDocument::from_descriptor(&h.desc).map_err(from_error));
        let s = match serde_json::to_string(&doc) {
            Ok(s) => s,
            Err(e) => return fail(ErfkitStatus::Internal, e.to_string()),
        };
        write_str(&s, buf, len, needed)
    })
}

/// Maximum relative error against the reference on x_i = a + i(b-a)/points, i = 1..points.
///
/// # Safety
/// `h` live; `re_b` and `argmax` valid pointers (argmax may be null).
#[no_mangle]
pub unsafe extern "C" fn erfkit_sweep(
    h: *const ErfkitApproximant,
    a: f64,
    b: f64,
    points: usize,
    re_b: *mut f64,
    argmax: *mut f64,
) -> ErfkitStatus {
    guard(|| {
        let h = tri!(handle(h));
        if re_b.is_null() {
            return fail(ErfkitStatus::NullArgument, "re_b is null");
        }
        let spec = tri!(GridSpec::from_f64(a, b, points, &h.ctx).map_err(from_error));
        let grid = tri!(ReferenceGrid::new(spec, h.desc.family.target(), &h.ctx).map_err(from_error));
        let rep = tri!(sweep(h.approx.as_ref(), &grid).map_err(from_error));
        *re_b = rep.re_b.to_f64();
        if !argmax.is_null() {
            *argmax = rep.argmax.to_f64();
        }
        ErfkitStatus::Ok
    })
}

/// Reference erf at `digits` significant digits.
///
/// # Safety
/// `x` NUL-terminated, `buf` at least `len` bytes or null.
#[no_mangle]
pub unsafe extern "C" fn erfkit_erf_reference(
    x: *const c_char,
    digits: c_int,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> ErfkitStatus {
    guard(|| {
        let xs = tri!(str_arg(x, "x"));
        if digits <= 0 {
            return fail(ErfkitStatus::Usage, "digits must be positive");
        }
        let ctx = tri!(PrecisionContext::new(digits as u32).map_err(from_error));
        let x = tri!(ctx.parse(xs).map_err(from_error));
        let v = tri!(erf_ref(&x, &ctx).map_err(from_error));
        write_str(&v.to_string_radix(10, Some(digits as usize)), buf, len, needed)
    })
}
