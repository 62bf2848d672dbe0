//! C ABI over `limitper`.
//!
//! Systems and windows are opaque handles created and freed here. Every
//! fallible call returns an [`LpStatus`]; on failure a description is kept
//! for [`lp_last_error_message`] on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use limitper::chair::{chair_amplitudes, chair_intensity, chair_label, ChairWeights};
use limitper::dyadic::MAX_EXPONENT;
use limitper::period_doubling::{pd_amplitudes, pd_eta, pd_intensity, PdWeights};
use limitper::subst::{
    builtin, find_legal_seed, fixed_point_window, legal_power, parse_rules, PatternWindow, Seed,
    SubstitutionSystem,
};
use limitper::{Complex, Dyadic, DyadicPoint2};

/// Largest rule power tried when looking for a legal seed.
const SEED_SEARCH_POWER: u32 = 4;

/// Cells allowed in one window, to keep a bad iteration count from
/// exhausting memory.
const MAX_WINDOW_CELLS: u128 = 1 << 32;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    IllegalSeed = 4,
    OutOfRange = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex> for LpComplex {
    fn from(z: Complex) -> Self {
        LpComplex { re: z.re, im: z.im }
    }
}

impl From<LpComplex> for Complex {
    fn from(z: LpComplex) -> Self {
        Complex::new(z.re, z.im)
    }
}

/// A validated substitution system.
pub struct LpSystem(SubstitutionSystem);

/// A rectangular patch of labels.
pub struct LpWindow(PatternWindow);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn fail(status: LpStatus, msg: impl Into<String>) -> LpStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> LpStatus) -> LpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(LpStatus::Panic, "internal panic"),
    }
}

fn dyadic(num: i64, exp: u32) -> Result<Dyadic, LpStatus> {
    if exp > MAX_EXPONENT {
        return Err(fail(LpStatus::OutOfRange, format!("exponent {exp} exceeds {MAX_EXPONENT}")));
    }
    Ok(Dyadic::normalize(num, exp))
}

fn point(m: i64, n: i64, s: u32) -> Result<DyadicPoint2, LpStatus> {
    if s > MAX_EXPONENT {
        return Err(fail(LpStatus::OutOfRange, format!("exponent {s} exceeds {MAX_EXPONENT}")));
    }
    Ok(DyadicPoint2::normalize(m, n, s))
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Looks up `period-doubling` or `chair`.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_system_builtin(name: *const c_char, out: *mut *mut LpSystem) -> LpStatus {
    guard(|| {
        if name.is_null() || out.is_null() {
            return fail(LpStatus::NullPointer, "null argument");
        }
        let system = match CStr::from_ptr(name).to_str() {
            Ok("period-doubling") | Ok("pd") => builtin::period_doubling(),
            Ok("chair") => builtin::chair(),
            _ => return fail(LpStatus::InvalidArgument, "unknown built-in system"),
        };
        *out = Box::into_raw(Box::new(LpSystem(system)));
        LpStatus::Ok
    })
}

/// Parses rule-file text.
///
/// # Safety
/// `text` must be a nul-terminated UTF-8 string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_system_parse(text: *const c_char, out: *mut *mut LpSystem) -> LpStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(LpStatus::NullPointer, "null argument");
        }
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            return fail(LpStatus::Parse, "rule text is not UTF-8");
        };
        match parse_rules(text) {
            Ok(system) => {
                *out = Box::into_raw(Box::new(LpSystem(system)));
                LpStatus::Ok
            }
            Err(e) => fail(LpStatus::Parse, e.to_string()),
        }
    })
}

/// # Safety
/// `system` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn lp_system_free(system: *mut LpSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// # Safety
/// `system` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lp_system_alphabet_size(system: *const LpSystem) -> usize {
    system.as_ref().map_or(0, |s| s.0.alphabet().len())
}

/// # Safety
/// `system` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lp_system_dim(system: *const LpSystem) -> usize {
    system.as_ref().map_or(0, |s| s.0.dim())
}

/// # Safety
/// `system` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lp_system_factor(system: *const LpSystem) -> usize {
    system.as_ref().map_or(0, |s| s.0.factor())
}

/// Iterates a legal seed `iterations` times under the smallest power of the
/// rule that fixes it.
///
/// `seed` holds `2^dim` labels, top row first in 2D; NULL picks the first
/// legal seed.
///
/// # Safety
/// `system` must be a live handle, `seed` NULL or `seed_len` readable bytes,
/// and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_fixed_point_window(
    system: *const LpSystem,
    seed: *const u8,
    seed_len: usize,
    iterations: u32,
    out: *mut *mut LpWindow,
) -> LpStatus {
    guard(|| {
        let (Some(system), false) = (system.as_ref(), out.is_null()) else {
            return fail(LpStatus::NullPointer, "null argument");
        };
        let sys = &system.0;
        let dim = sys.dim();
        let (seed, power) = if seed.is_null() {
            match find_legal_seed(sys, SEED_SEARCH_POWER) {
                Some(found) => found,
                None => return fail(LpStatus::IllegalSeed, "no legal seed found"),
            }
        } else {
            if seed_len != 1 << dim {
                return fail(LpStatus::InvalidArgument, format!("seed needs {} labels", 1 << dim));
            }
            let labels = std::slice::from_raw_parts(seed, seed_len);
            if labels.iter().any(|&l| l as usize >= sys.alphabet().len()) {
                return fail(LpStatus::InvalidArgument, "seed label outside the alphabet");
            }
            let seed = match dim {
                1 => Seed::word(labels[0], labels[1]),
                _ => Seed::block([labels[0], labels[1]], [labels[2], labels[3]]),
            };
            match legal_power(sys, &seed, SEED_SEARCH_POWER) {
                Some(p) => (seed, p),
                None => return fail(LpStatus::IllegalSeed, "seed is not legal for this system"),
            }
        };
        let side = (sys.factor() as u128)
            .checked_pow(power * iterations)
            .and_then(|s| (2 * s).checked_pow(dim as u32));
        if side.is_none_or(|cells| cells > MAX_WINDOW_CELLS) {
            return fail(LpStatus::OutOfRange, "window would be too large");
        }
        match fixed_point_window(&sys.power(power), &seed, iterations) {
            Ok(w) => {
                *out = Box::into_raw(Box::new(LpWindow(w)));
                LpStatus::Ok
            }
            Err(e) => fail(LpStatus::IllegalSeed, e.to_string()),
        }
    })
}

/// # Safety
/// `window` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn lp_window_free(window: *mut LpWindow) {
    if !window.is_null() {
        drop(Box::from_raw(window));
    }
}

/// # Safety
/// `window` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lp_window_dim(window: *const LpWindow) -> usize {
    window.as_ref().map_or(0, |w| w.0.dim())
}

/// Number of cells.
///
/// # Safety
/// `window` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lp_window_len(window: *const LpWindow) -> usize {
    window.as_ref().map_or(0, |w| w.0.labels().len())
}

/// Lowest coordinate and cell count along `axis`.
///
/// # Safety
/// `window` must be a live handle; `origin` and `extent` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_window_axis(
    window: *const LpWindow,
    axis: usize,
    origin: *mut i64,
    extent: *mut usize,
) -> LpStatus {
    guard(|| {
        let (Some(w), false, false) = (window.as_ref(), origin.is_null(), extent.is_null()) else {
            return fail(LpStatus::NullPointer, "null argument");
        };
        if axis >= w.0.dim() {
            return fail(LpStatus::OutOfRange, "axis out of range");
        }
        *origin = w.0.origin()[axis];
        *extent = w.0.extent()[axis];
        LpStatus::Ok
    })
}

/// Copies all labels, x fastest and lowest row first, into `buf`.
///
/// # Safety
/// `window` must be a live handle and `buf` hold `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn lp_window_labels(window: *const LpWindow, buf: *mut u8, len: usize) -> LpStatus {
    guard(|| {
        let (Some(w), false) = (window.as_ref(), buf.is_null()) else {
            return fail(LpStatus::NullPointer, "null argument");
        };
        let labels = w.0.labels();
        if len < labels.len() {
            return fail(LpStatus::OutOfRange, format!("buffer needs {} bytes", labels.len()));
        }
        ptr::copy_nonoverlapping(labels.as_ptr(), buf, labels.len());
        LpStatus::Ok
    })
}

/// Label at `(x, y)`; `y` is ignored in 1D.
///
/// # Safety
/// `window` must be a live handle and `label` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_window_get(window: *const LpWindow, x: i64, y: i64, label: *mut u8) -> LpStatus {
    guard(|| {
        let (Some(w), false) = (window.as_ref(), label.is_null()) else {
            return fail(LpStatus::NullPointer, "null argument");
        };
        let pos = [x, y];
        match w.0.get(&pos[..w.0.dim()]) {
            Some(l) => {
                *label = l;
                LpStatus::Ok
            }
            None => fail(LpStatus::OutOfRange, "position outside the window"),
        }
    })
}

/// Period doubling amplitudes `A`, `B` at `num / 2^exp`.
///
/// # Safety
/// `a` and `b` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lp_pd_amplitudes(num: i64, exp: u32, a: *mut LpComplex, b: *mut LpComplex) -> LpStatus {
    guard(|| {
        if a.is_null() || b.is_null() {
            return fail(LpStatus::NullPointer, "null argument");
        }
        let k = match dyadic(num, exp) {
            Ok(k) => k,
            Err(s) => return s,
        };
        let amps = pd_amplitudes(k);
        *a = amps.a.into();
        *b = amps.b.into();
        LpStatus::Ok
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lp_pd_intensity(
    num: i64,
    exp: u32,
    alpha: LpComplex,
    beta: LpComplex,
    out: *mut f64,
) -> LpStatus {
    guard(|| {
        if out.is_null() {
            return fail(LpStatus::NullPointer, "null argument");
        }
        match dyadic(num, exp) {
            Ok(k) => {
                *out = pd_intensity(k, &PdWeights::new(alpha.into(), beta.into()));
                LpStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Autocorrelation coefficient `η(z)` for weights `alpha` on `a`, `beta` on `b`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lp_pd_eta(z: i64, alpha: LpComplex, beta: LpComplex, out: *mut LpComplex) -> LpStatus {
    guard(|| {
        if out.is_null() {
            return fail(LpStatus::NullPointer, "null argument");
        }
        *out = pd_eta(z, &PdWeights::new(alpha.into(), beta.into())).into();
        LpStatus::Ok
    })
}

/// Chair colour of the cell with lower left corner `(x, y)`.
#[no_mangle]
pub extern "C" fn lp_chair_label(x: i64, y: i64) -> u8 {
    chair_label([x, y])
}

/// The four chair amplitudes at `(m, n) / 2^s`, written to `out[0..4]`.
///
/// # Safety
/// `out` must hold four writable values.
#[no_mangle]
pub unsafe extern "C" fn lp_chair_amplitudes(m: i64, n: i64, s: u32, out: *mut LpComplex) -> LpStatus {
    guard(|| {
        if out.is_null() {
            return fail(LpStatus::NullPointer, "null argument");
        }
        let k = match point(m, n, s) {
            Ok(k) => k,
            Err(st) => return st,
        };
        for (i, a) in chair_amplitudes(k).a.iter().enumerate() {
            *out.add(i) = (*a).into();
        }
        LpStatus::Ok
    })
}

/// # Safety
/// `weights` must hold four readable values and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn lp_chair_intensity(
    m: i64,
    n: i64,
    s: u32,
    weights: *const LpComplex,
    out: *mut f64,
) -> LpStatus {
    guard(|| {
        if weights.is_null() || out.is_null() {
            return fail(LpStatus::NullPointer, "null argument");
        }
        let k = match point(m, n, s) {
            Ok(k) => k,
            Err(st) => return st,
        };
        let alpha: [Complex; 4] = std::array::from_fn(|i| (*weights.add(i)).into());
        *out = chair_intensity(k, &ChairWeights::new(alpha));
        LpStatus::Ok
    })
}

/// Rewrites `num / 2^exp` in normal form.
///
/// # Safety
/// `num` and `exp` must be readable and writable.
#[no_mangle]
pub unsafe extern "C" fn lp_dyadic_normalize(num: *mut i64, exp: *mut u32) -> LpStatus {
    guard(|| {
        if num.is_null() || exp.is_null() {
            return fail(LpStatus::NullPointer, "null argument");
        }
        match dyadic(*num, *exp) {
            Ok(d) => {
                *num = d.num();
                *exp = d.exp();
                LpStatus::Ok
            }
            Err(s) => s,
        }
    })
}
