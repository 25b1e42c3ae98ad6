//! C ABI over the `saft` crate.
//!
//! Handles are opaque pointers created by `*_new` functions and released with
//! the matching `*_free`. Complex buffers are interleaved `re, im` doubles, so a
//! signal of `n` samples occupies `2 n` doubles. Every call returns a
//! [`SaftStatus`]; on failure [`saft_last_error_message`] describes the error.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use saft::aconv::aconv_fast;
use saft::engine::{heat_evolve, HeatMethod, SaftPlan};
use saft::grid::{Grid, Mode, Signal};
use saft::{SaftError, SaftParams, SpecialKind};

/// Return codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaftStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    InvalidGrid = 3,
    InvalidArgument = 4,
    Mismatch = 5,
    Panic = 6,
    BufferTooSmall = 7,
}

/// Kinds accepted by [`saft_params_special`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaftSpecialKind {
    Fourier = 0,
    /// Fractional Fourier transform; `value` is the angle.
    Frft = 1,
    /// Fresnel transform; `value` is `b`.
    Fresnel = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaftHeatMethod {
    Multiplier = 0,
    Kernel = 1,
}

/// Validated transform parameters.
pub struct SaftParamsHandle(SaftParams);

/// Precomputed fast transform on a fixed grid.
pub struct SaftPlanHandle(SaftPlan);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &SaftError) -> SaftStatus {
    match e {
        SaftError::InvalidParams(_) => SaftStatus::InvalidParams,
        SaftError::InvalidGrid(_) => SaftStatus::InvalidGrid,
        SaftError::GridMismatch(_) | SaftError::NotGridAligned { .. } | SaftError::LatticeMisaligned(_) => {
            SaftStatus::Mismatch
        }
        _ => SaftStatus::InvalidArgument,
    }
}

struct Failure(SaftStatus, String);

impl From<SaftError> for Failure {
    fn from(e: SaftError) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SaftStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SaftStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SaftStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            SaftStatus::Panic
        }
    }
}

unsafe fn read_complex(ptr: *const f64, n: usize, what: &str) -> Result<Vec<Complex64>, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    let raw = std::slice::from_raw_parts(ptr, 2 * n);
    Ok(raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect())
}

unsafe fn write_complex(ptr: *mut f64, cap: usize, v: &[Complex64]) -> Result<(), Failure> {
    if ptr.is_null() {
        return Err(null("output"));
    }
    if cap < 2 * v.len() {
        return Err(Failure(
            SaftStatus::BufferTooSmall,
            format!("output holds {cap} doubles, {} needed", 2 * v.len()),
        ));
    }
    let out = std::slice::from_raw_parts_mut(ptr, 2 * v.len());
    for (c, z) in out.chunks_exact_mut(2).zip(v) {
        c[0] = z.re;
        c[1] = z.im;
    }
    Ok(())
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn params_ref<'a>(p: *const SaftParamsHandle) -> Result<&'a SaftParams, Failure> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| null("params"))
}

unsafe fn plan_ref<'a>(p: *const SaftPlanHandle) -> Result<&'a SaftPlan, Failure> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| null("plan"))
}

/// Creates parameters; fails unless `ad - bc = 1` and `b != 0`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn saft_params_new(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    p: f64,
    q: f64,
    out: *mut *mut SaftParamsHandle,
) -> SaftStatus {
    guard(|| put(out, SaftParamsHandle(SaftParams::new(a, b, c, d, p, q)?)))
}

/// Creates a named special case; `kind` is a [`SaftSpecialKind`] value.
/// `value` is ignored for `Fourier`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn saft_params_special(
    kind: i32,
    value: f64,
    out: *mut *mut SaftParamsHandle,
) -> SaftStatus {
    guard(|| {
        let k = match kind {
            k if k == SaftSpecialKind::Fourier as i32 => SpecialKind::Fourier,
            k if k == SaftSpecialKind::Frft as i32 => SpecialKind::Frft(value),
            k if k == SaftSpecialKind::Fresnel as i32 => SpecialKind::Fresnel(value),
            _ => return Err(Failure(SaftStatus::InvalidArgument, format!("unknown special kind {kind}"))),
        };
        put(out, SaftParamsHandle(SaftParams::special(k)?))
    })
}

/// Writes `a, b, c, d, p, q` into `out[0..6]`.
///
/// # Safety
/// `params` must come from this library; `out` must hold six doubles.
#[no_mangle]
pub unsafe extern "C" fn saft_params_get(params: *const SaftParamsHandle, out: *mut f64) -> SaftStatus {
    guard(|| {
        let p = params_ref(params)?;
        if out.is_null() {
            return Err(null("out"));
        }
        std::slice::from_raw_parts_mut(out, 6).copy_from_slice(&p.as_array());
        Ok(())
    })
}

/// Releases parameters. Null is ignored.
///
/// # Safety
/// `params` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn saft_params_free(params: *mut SaftParamsHandle) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Plans the fast transform on the grid `start + n step`, `0 <= n < count`.
///
/// # Safety
/// `params` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn saft_plan_new(
    params: *const SaftParamsHandle,
    start: f64,
    step: f64,
    count: usize,
    out: *mut *mut SaftPlanHandle,
) -> SaftStatus {
    guard(|| {
        let p = params_ref(params)?;
        let grid = Grid::new(start, step, count)?;
        put(out, SaftPlanHandle(SaftPlan::new(*p, grid)))
    })
}

/// Releases a plan. Null is ignored.
///
/// # Safety
/// `plan` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn saft_plan_free(plan: *mut SaftPlanHandle) {
    if !plan.is_null() {
        drop(Box::from_raw(plan));
    }
}

/// Number of samples; 0 for a null plan.
///
/// # Safety
/// `plan` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn saft_plan_len(plan: *const SaftPlanHandle) -> usize {
    plan.as_ref().map_or(0, |h| h.0.len())
}

/// The ascending output grid `omega_j = start + j step`.
///
/// # Safety
/// `plan` must come from this library; `start` and `step` must be writable.
#[no_mangle]
pub unsafe extern "C" fn saft_plan_omega_grid(
    plan: *const SaftPlanHandle,
    start: *mut f64,
    step: *mut f64,
) -> SaftStatus {
    guard(|| {
        let g = plan_ref(plan)?.freq_grid();
        if start.is_null() || step.is_null() {
            return Err(null("start/step"));
        }
        *start = g.start;
        *step = g.step;
        Ok(())
    })
}

/// Forward transform of `len` interleaved samples into `output` (`out_cap` doubles).
///
/// # Safety
/// `input` must hold `2 len` doubles and `output` `out_cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn saft_forward(
    plan: *const SaftPlanHandle,
    input: *const f64,
    len: usize,
    output: *mut f64,
    out_cap: usize,
) -> SaftStatus {
    guard(|| {
        let plan = plan_ref(plan)?;
        check_len(plan, len)?;
        let x = read_complex(input, len, "input")?;
        finite(&x)?;
        write_complex(output, out_cap, &plan.forward_samples(&x))
    })
}

/// Inverse of [`saft_forward`].
///
/// # Safety
/// `input` must hold `2 len` doubles and `output` `out_cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn saft_inverse(
    plan: *const SaftPlanHandle,
    input: *const f64,
    len: usize,
    output: *mut f64,
    out_cap: usize,
) -> SaftStatus {
    guard(|| {
        let plan = plan_ref(plan)?;
        check_len(plan, len)?;
        let x = read_complex(input, len, "input")?;
        finite(&x)?;
        write_complex(output, out_cap, &plan.inverse_samples(&x))
    })
}

fn check_len(plan: &SaftPlan, len: usize) -> Result<(), Failure> {
    if len != plan.len() {
        return Err(Failure(
            SaftStatus::Mismatch,
            format!("plan has {} samples, input has {len}", plan.len()),
        ));
    }
    Ok(())
}

fn finite(x: &[Complex64]) -> Result<(), Failure> {
    match x.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(index) => Err(SaftError::NonFinite { index }.into()),
        None => Ok(()),
    }
}

unsafe fn signal(start: f64, step: f64, count: usize, data: *const f64, what: &str) -> Result<Signal, Failure> {
    let grid = Grid::new(start, step, count)?;
    Ok(Signal::new(grid, Mode::Cyclic, read_complex(data, count, what)?)?)
}

/// Cyclic A-convolution of two signals on the same grid. The grid must
/// contain `t = 0` as a node.
///
/// # Safety
/// `f`, `g` must hold `2 count` doubles and `output` `out_cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn saft_aconv_cyclic(
    params: *const SaftParamsHandle,
    start: f64,
    step: f64,
    count: usize,
    f: *const f64,
    g: *const f64,
    output: *mut f64,
    out_cap: usize,
) -> SaftStatus {
    guard(|| {
        let p = params_ref(params)?;
        let f = signal(start, step, count, f, "f")?;
        let g = signal(start, step, count, g, "g")?;
        let h = aconv_fast(p, &f, &g, Mode::Cyclic)?;
        write_complex(output, out_cap, &h.samples)
    })
}

/// Heat evolution of `g` to time `t > 0` (cyclic mode); `method` is a
/// [`SaftHeatMethod`] value.
///
/// # Safety
/// `g` must hold `2 count` doubles and `output` `out_cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn saft_heat_evolve(
    params: *const SaftParamsHandle,
    start: f64,
    step: f64,
    count: usize,
    g: *const f64,
    t: f64,
    method: i32,
    output: *mut f64,
    out_cap: usize,
) -> SaftStatus {
    guard(|| {
        let p = params_ref(params)?;
        let g = signal(start, step, count, g, "g")?;
        let m = match method {
            m if m == SaftHeatMethod::Multiplier as i32 => HeatMethod::Multiplier,
            m if m == SaftHeatMethod::Kernel as i32 => HeatMethod::Kernel,
            _ => return Err(Failure(SaftStatus::InvalidArgument, format!("unknown heat method {method}"))),
        };
        write_complex(output, out_cap, &heat_evolve(p, &g, t, m)?.samples)
    })
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn saft_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn saft_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
