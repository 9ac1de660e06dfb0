//! C ABI over the `hpz` library.
//!
//! Every function returns an [`HpzStatus`]; results go through out-pointers.
//! The message of the most recent failure on the calling thread is available
//! from [`hpz_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hpz::coeffs::{CoefficientSet, EvalContext, Mode};
use hpz::dynamics::{omega_obs_with, stationary_q};
use hpz::params::{ModelParams, ModelVariant};
use hpz::roots::gamma_critical;
use hpz::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpzStatus {
    Ok = 0,
    InvalidParameter = 1,
    DegenerateRoots = 2,
    Conditioning = 3,
    Domain = 4,
    Divergent = 5,
    PoleCollision = 6,
    Numerical = 7,
    Inconsistent = 8,
    Usage = 9,
    NullPointer = 10,
    Panic = 11,
}

/// Model variant selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpzVariant {
    Original = 0,
    CaldeiraLeggett = 1,
    WeakShifted = 2,
}

/// Coefficient family selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpzMode {
    Exact = 0,
    Weak = 1,
}

/// A, B, C, D at time t (t is infinite for asymptotic values).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HpzCoefficients {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// Opaque evaluation context for one parameter point.
pub struct HpzContext {
    inner: EvalContext,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HpzStatus {
    match e {
        Error::InvalidParameter(_) => HpzStatus::InvalidParameter,
        Error::DegenerateRoots { .. } => HpzStatus::DegenerateRoots,
        Error::Conditioning { .. } => HpzStatus::Conditioning,
        Error::Domain(_) => HpzStatus::Domain,
        Error::Divergent(_) => HpzStatus::Divergent,
        Error::PoleCollision { .. } => HpzStatus::PoleCollision,
        Error::Numerical(_) => HpzStatus::Numerical,
        Error::Inconsistent(_) => HpzStatus::Inconsistent,
        Error::Usage(_) => HpzStatus::Usage,
    }
}

/// Run `f`, translating errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), Error>>(f: F) -> HpzStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HpzStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            HpzStatus::Panic
        }
    }
}

fn variant(v: HpzVariant) -> ModelVariant {
    match v {
        HpzVariant::Original => ModelVariant::Original,
        HpzVariant::CaldeiraLeggett => ModelVariant::CaldeiraLeggett,
        HpzVariant::WeakShifted => ModelVariant::WeakShiftedKernel,
    }
}

fn mode(m: HpzMode) -> Mode {
    match m {
        HpzMode::Exact => Mode::Exact,
        HpzMode::Weak => Mode::Weak,
    }
}

fn export(c: &CoefficientSet) -> HpzCoefficients {
    HpzCoefficients { t: c.t, a: c.a, b: c.b, c: c.c, d: c.d }
}

/// Null-pointer checks come first so that they map to their own code.
macro_rules! require {
    ($($p:expr => $name:literal),+) => {
        $(if $p.is_null() {
            set_error(format!("null pointer: {}", $name));
            return HpzStatus::NullPointer;
        })+
    };
}

/// Create a context. On success `*out` owns a context to be released with
/// [`hpz_context_free`].
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn hpz_context_new(
    mass: f64,
    omega: f64,
    omega_c: f64,
    gamma: f64,
    hbar: f64,
    variant_id: HpzVariant,
    out: *mut *mut HpzContext,
) -> HpzStatus {
    require!(out => "out");
    *out = ptr::null_mut();
    guard(|| {
        let p = ModelParams::new(mass, omega, omega_c, gamma, hbar)?;
        let ctx = EvalContext::new(&p, variant(variant_id))?;
        *out = Box::into_raw(Box::new(HpzContext { inner: ctx }));
        Ok(())
    })
}

/// Release a context. Passing null is a no-op.
///
/// # Safety
/// `ctx` must be null or a pointer obtained from [`hpz_context_new`] that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn hpz_context_free(ctx: *mut HpzContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Coefficients at time t in the context's units.
///
/// # Safety
/// `ctx` must be a live context and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hpz_coefficients(
    ctx: *const HpzContext,
    t: f64,
    mode_id: HpzMode,
    out: *mut HpzCoefficients,
) -> HpzStatus {
    require!(ctx => "ctx", out => "out");
    guard(|| {
        *out = export(&(*ctx).inner.evaluate(t, mode(mode_id))?);
        Ok(())
    })
}

/// t → ∞ values.
///
/// # Safety
/// `ctx` must be a live context and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hpz_asymptotics(ctx: *const HpzContext, mode_id: HpzMode, out: *mut HpzCoefficients) -> HpzStatus {
    require!(ctx => "ctx", out => "out");
    guard(|| {
        *out = export(&(*ctx).inner.asymptotics(mode(mode_id))?);
        Ok(())
    })
}

/// The three roots of the characteristic cubic, real and imaginary parts.
///
/// # Safety
/// `ctx` must be a live context; `re` and `im` must each point to three writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hpz_roots(ctx: *const HpzContext, re: *mut f64, im: *mut f64) -> HpzStatus {
    require!(ctx => "ctx", re => "re", im => "im");
    guard(|| {
        for (k, z) in (*ctx).inner.roots().z.iter().enumerate() {
            *re.add(k) = z.re;
            *im.add(k) = z.im;
        }
        Ok(())
    })
}

/// Observable frequency squared at time t (may be negative).
///
/// # Safety
/// `ctx` must be a live context and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hpz_omega_obs2(ctx: *const HpzContext, t: f64, out: *mut f64) -> HpzStatus {
    require!(ctx => "ctx", out => "out");
    guard(|| {
        *out = omega_obs_with(&(*ctx).inner, t)?.omega2;
        Ok(())
    })
}

/// Stationary positivity parameter Q (exact) or Q_w (weak).
///
/// # Safety
/// `ctx` must be a live context and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hpz_stationary_q(ctx: *const HpzContext, mode_id: HpzMode, out: *mut f64) -> HpzStatus {
    require!(ctx => "ctx", out => "out");
    guard(|| {
        let c = &(*ctx).inner;
        *out = stationary_q(c.params(), c.variant(), mode(mode_id))?.q;
        Ok(())
    })
}

/// Critical coupling of a variant.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hpz_gamma_critical(omega: f64, omega_c: f64, variant_id: HpzVariant, out: *mut f64) -> HpzStatus {
    require!(out => "out");
    guard(|| {
        let p = ModelParams::new(1.0, omega, omega_c, 0.0, 1.0)?;
        *out = gamma_critical(&p, variant(variant_id))?;
        Ok(())
    })
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hpz_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hpz_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
