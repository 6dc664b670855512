//! C ABI for the plemelj library.
//!
//! Curves and densities are opaque handles created and freed through this
//! interface; every operation returns a status code and writes results
//! through out-pointers. On any non-Ok status a thread-local message is
//! available via [`plemelj_last_error_message`]. The header is generated by
//! cbindgen into `include/plemelj.h` at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use plemelj::curve::Curve;
use plemelj::density::Density;
use plemelj::pv::{pv_curve, PvConfig};
use plemelj::transform::{boundary_values, cauchy_transform, verify_jump, TransformConfig};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlemeljStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ComputeError = 3,
    Panic = 4,
}

/// A complex number crossing the ABI.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PlemeljComplex {
    pub re: f64,
    pub im: f64,
}

impl From<num_complex::Complex64> for PlemeljComplex {
    fn from(z: num_complex::Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// Plemelj boundary values at one curve point.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PlemeljBoundary {
    pub point: PlemeljComplex,
    pub phi_plus: PlemeljComplex,
    pub phi_minus: PlemeljComplex,
    pub pv_part: PlemeljComplex,
    pub density_value: PlemeljComplex,
    pub pv_error_estimate: f64,
    pub pv_converged: bool,
}

/// Opaque curve handle.
pub struct PlemeljCurve(Curve);
/// Opaque density handle.
pub struct PlemeljDensity(Density);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl std::fmt::Display) {
    let cleaned = msg.to_string().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(cleaned).unwrap_or_default();
    });
}

/// Copy the last error message for this thread into `buf` (NUL-terminated,
/// truncated to `len` bytes). Returns the full message length in bytes,
/// excluding the terminator; 0 means no pending error.
///
/// # Safety
/// `buf` must point to `len` writable bytes, or be NULL (then only the
/// required length is returned).
#[no_mangle]
pub unsafe extern "C" fn plemelj_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast(), n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

fn guard<T>(out: *mut T, f: impl FnOnce() -> Result<T, PlemeljStatus>) -> PlemeljStatus {
    if out.is_null() {
        set_error("output pointer is NULL");
        return PlemeljStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(value)) => {
            unsafe { out.write(value) };
            PlemeljStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            PlemeljStatus::Panic
        }
    }
}

unsafe fn slice_arg<'a>(ptr: *const f64, n: usize) -> Result<&'a [f64], PlemeljStatus> {
    if n == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        set_error("array pointer is NULL with nonzero length");
        return Err(PlemeljStatus::NullPointer);
    }
    Ok(std::slice::from_raw_parts(ptr, n))
}

unsafe fn str_arg<'a>(ptr: *const c_char) -> Result<&'a str, PlemeljStatus> {
    if ptr.is_null() {
        set_error("string pointer is NULL");
        return Err(PlemeljStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        PlemeljStatus::InvalidArgument
    })
}

unsafe fn curve_arg<'a>(ptr: *const PlemeljCurve) -> Result<&'a Curve, PlemeljStatus> {
    if ptr.is_null() {
        set_error("curve handle is NULL");
        return Err(PlemeljStatus::NullPointer);
    }
    Ok(&(*ptr).0)
}

unsafe fn density_arg<'a>(ptr: *const PlemeljDensity) -> Result<&'a Density, PlemeljStatus> {
    if ptr.is_null() {
        set_error("density handle is NULL");
        return Err(PlemeljStatus::NullPointer);
    }
    Ok(&(*ptr).0)
}

/// Create a builtin curve: `segment`, `circle`, `arc`, or `parabola-graph`.
///
/// # Safety
/// `name` must be a NUL-terminated string, `params` must point to
/// `n_params` doubles (or be NULL when `n_params` is 0), and `out` must be
/// a valid pointer. The handle must be released with [`plemelj_curve_free`].
#[no_mangle]
pub unsafe extern "C" fn plemelj_curve_builtin(
    name: *const c_char,
    params: *const f64,
    n_params: usize,
    out: *mut *mut PlemeljCurve,
) -> PlemeljStatus {
    guard(out, || {
        let name = str_arg(name)?;
        let params = slice_arg(params, n_params)?;
        match Curve::builtin(name, params) {
            Ok(curve) => Ok(Box::into_raw(Box::new(PlemeljCurve(curve)))),
            Err(e) => {
                set_error(e);
                Err(PlemeljStatus::InvalidArgument)
            }
        }
    })
}

/// Build a curve through points (re[i], im[i]) by spline interpolation and
/// arc-length reparameterization.
///
/// # Safety
/// `re` and `im` must each point to `n` doubles; `out` must be valid. The
/// handle must be released with [`plemelj_curve_free`].
#[no_mangle]
pub unsafe extern "C" fn plemelj_curve_from_points(
    re: *const f64,
    im: *const f64,
    n: usize,
    closed: bool,
    out: *mut *mut PlemeljCurve,
) -> PlemeljStatus {
    guard(out, || {
        let re = slice_arg(re, n)?;
        let im = slice_arg(im, n)?;
        let points: Vec<num_complex::Complex64> = re
            .iter()
            .zip(im)
            .map(|(&r, &i)| num_complex::Complex64::new(r, i))
            .collect();
        match Curve::from_points(&points, closed) {
            Ok(curve) => Ok(Box::into_raw(Box::new(PlemeljCurve(curve)))),
            Err(e) => {
                set_error(e);
                Err(PlemeljStatus::InvalidArgument)
            }
        }
    })
}

/// Release a curve handle. NULL is ignored.
///
/// # Safety
/// `ptr` must be a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn plemelj_curve_free(ptr: *mut PlemeljCurve) {
    if !ptr.is_null() {
        drop(Box::from_raw(ptr));
    }
}

/// Arc length of the curve.
///
/// # Safety
/// `curve` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn plemelj_curve_length(
    curve: *const PlemeljCurve,
    out: *mut f64,
) -> PlemeljStatus {
    guard(out, || Ok(curve_arg(curve)?.length()))
}

/// Create a builtin density: `constant`, `linear`, `holder-power`,
/// `dini-log`, or `step`.
///
/// # Safety
/// As [`plemelj_curve_builtin`]; release with [`plemelj_density_free`].
#[no_mangle]
pub unsafe extern "C" fn plemelj_density_builtin(
    name: *const c_char,
    params: *const f64,
    n_params: usize,
    out: *mut *mut PlemeljDensity,
) -> PlemeljStatus {
    guard(out, || {
        let name = str_arg(name)?;
        let params = slice_arg(params, n_params)?;
        match Density::builtin(name, params) {
            Ok(d) => Ok(Box::into_raw(Box::new(PlemeljDensity(d)))),
            Err(e) => {
                set_error(e);
                Err(PlemeljStatus::InvalidArgument)
            }
        }
    })
}

/// Tabulated density over strictly increasing parameters.
///
/// # Safety
/// `tau`, `re`, `im` must each point to `n` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn plemelj_density_from_table(
    tau: *const f64,
    re: *const f64,
    im: *const f64,
    n: usize,
    out: *mut *mut PlemeljDensity,
) -> PlemeljStatus {
    guard(out, || {
        let tau = slice_arg(tau, n)?;
        let re = slice_arg(re, n)?;
        let im = slice_arg(im, n)?;
        let values: Vec<num_complex::Complex64> = re
            .iter()
            .zip(im)
            .map(|(&r, &i)| num_complex::Complex64::new(r, i))
            .collect();
        match Density::from_table(tau, &values) {
            Ok(d) => Ok(Box::into_raw(Box::new(PlemeljDensity(d)))),
            Err(e) => {
                set_error(e);
                Err(PlemeljStatus::InvalidArgument)
            }
        }
    })
}

/// Release a density handle. NULL is ignored.
///
/// # Safety
/// `ptr` must be a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn plemelj_density_free(ptr: *mut PlemeljDensity) {
    if !ptr.is_null() {
        drop(Box::from_raw(ptr));
    }
}

/// P.V. int_C phi(s)/(s - psi(tau0)) ds with default settings.
/// `out_converged` may be NULL when the flag is not needed.
///
/// # Safety
/// Handles must be live; `out_value` (and `out_error_estimate`,
/// `out_converged` when non-NULL) must be writable.
#[no_mangle]
pub unsafe extern "C" fn plemelj_pv_curve(
    curve: *const PlemeljCurve,
    density: *const PlemeljDensity,
    tau0: f64,
    out_value: *mut PlemeljComplex,
    out_error_estimate: *mut f64,
    out_converged: *mut bool,
) -> PlemeljStatus {
    guard(out_value, || {
        let curve = curve_arg(curve)?;
        let density = density_arg(density)?;
        match pv_curve(curve, density, tau0, &PvConfig::default()) {
            Ok(pv) => {
                if !out_error_estimate.is_null() {
                    out_error_estimate.write(pv.error_estimate);
                }
                if !out_converged.is_null() {
                    out_converged.write(pv.converged);
                }
                Ok(pv.value.into())
            }
            Err(e) => {
                set_error(e);
                Err(PlemeljStatus::ComputeError)
            }
        }
    })
}

/// Cauchy transform Phi(z) for z off the curve.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn plemelj_cauchy_transform(
    curve: *const PlemeljCurve,
    density: *const PlemeljDensity,
    z: PlemeljComplex,
    out: *mut PlemeljComplex,
) -> PlemeljStatus {
    guard(out, || {
        let curve = curve_arg(curve)?;
        let density = density_arg(density)?;
        match cauchy_transform(
            curve,
            density,
            num_complex::Complex64::new(z.re, z.im),
            &TransformConfig::default(),
        ) {
            Ok(phi) => Ok(phi.into()),
            Err(e) => {
                set_error(e);
                Err(PlemeljStatus::ComputeError)
            }
        }
    })
}

/// Plemelj boundary values at an interior curve parameter.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn plemelj_boundary_values(
    curve: *const PlemeljCurve,
    density: *const PlemeljDensity,
    tau0: f64,
    out: *mut PlemeljBoundary,
) -> PlemeljStatus {
    guard(out, || {
        let curve = curve_arg(curve)?;
        let density = density_arg(density)?;
        match boundary_values(curve, density, tau0, &TransformConfig::default()) {
            Ok(bv) => Ok(PlemeljBoundary {
                point: bv.point.into(),
                phi_plus: bv.phi_plus.into(),
                phi_minus: bv.phi_minus.into(),
                pv_part: bv.pv_part.into(),
                density_value: bv.density_value.into(),
                pv_error_estimate: bv.pv.error_estimate,
                pv_converged: bv.pv.converged,
            }),
            Err(e) => {
                set_error(e);
                Err(PlemeljStatus::ComputeError)
            }
        }
    })
}

/// Jump and sum residuals from two independent convergence runs of depth
/// `depth` (radii 2^-n). `out_sum_residual` may be NULL.
///
/// # Safety
/// Handles must be live; `out_jump_residual` must be writable.
#[no_mangle]
pub unsafe extern "C" fn plemelj_verify_jump(
    curve: *const PlemeljCurve,
    density: *const PlemeljDensity,
    tau0: f64,
    depth: u32,
    out_jump_residual: *mut f64,
    out_sum_residual: *mut f64,
) -> PlemeljStatus {
    guard(out_jump_residual, || {
        let curve = curve_arg(curve)?;
        let density = density_arg(density)?;
        let cfg = TransformConfig {
            depth,
            ..TransformConfig::default()
        };
        match verify_jump(curve, density, tau0, &cfg) {
            Ok(check) => {
                if !out_sum_residual.is_null() {
                    out_sum_residual.write(check.sum_residual);
                }
                Ok(check.jump_residual)
            }
            Err(e) => {
                set_error(e);
                Err(PlemeljStatus::ComputeError)
            }
        }
    })
}
