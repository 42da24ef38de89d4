//! C ABI for harmap.
//!
//! Maps and budgets are opaque handles created and freed through this API.
//! Every fallible call returns a [`HarmapStatus`]; on failure the message is
//! available from [`harmap_last_error`] on the same thread until the next
//! failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use harmap::report::encode_ppm;
use harmap::{
    classify_grid_with_threads, eval_harmonic, preset, Error, FatouMode, GridSpec, HarmonicMap, MembershipTag,
    OrbitBudget, OrbitTag, PointVerdict, Value,
};
use num_complex::Complex64;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HarmapStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    Domain = 4,
    NotPolynomial = 5,
    NotTranscendental = 6,
    Precondition = 7,
    GridMismatch = 8,
    Config = 9,
    Io = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HarmapMembership {
    FatouLike = 0,
    JuliaLike = 1,
    Undetermined = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HarmapMode {
    None = 0,
    ConvergentFamily = 1,
    CompactDivergence = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HarmapOrbitClass {
    Escaping = 0,
    OrbitallyBounded = 1,
    Oscillating = 2,
    Undetermined = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmapComplex {
    pub re: f64,
    pub im: f64,
}

/// Result of an evaluation. When `overflow` is set, `re` and `im` are 0 and
/// `log_abs` carries `log|w|`; otherwise `log_abs` is `log|re + i im|`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmapValue {
    pub overflow: bool,
    pub re: f64,
    pub im: f64,
    pub log_abs: f64,
}

/// Window and resolution; pixel (i, j) is column i, row j, row 0 on top.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmapGridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub width: u32,
    pub height: u32,
}

/// Pointwise verdict. Indices are -1 when absent.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmapVerdict {
    pub membership: HarmapMembership,
    pub mode: HarmapMode,
    pub orbit_class: HarmapOrbitClass,
    pub exit_index: i64,
    pub settle_index: i64,
}

/// Opaque harmonic map `h + conj(g)`.
pub struct HarmapMap {
    inner: HarmonicMap,
}

/// Opaque orbit budget.
pub struct HarmapBudget {
    inner: OrbitBudget,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: HarmapStatus, msg: impl Into<String>) -> HarmapStatus {
    set_error(msg.into());
    status
}

fn status_of(e: &Error) -> HarmapStatus {
    match e {
        Error::Syntax { .. } => HarmapStatus::Syntax,
        Error::ExprDomain { .. } | Error::Domain(_) => HarmapStatus::Domain,
        Error::NotPolynomial => HarmapStatus::NotPolynomial,
        Error::NotTranscendental => HarmapStatus::NotTranscendental,
        Error::Precondition(_) => HarmapStatus::Precondition,
        Error::GridMismatch => HarmapStatus::GridMismatch,
        Error::Config(_) | Error::Json(_) => HarmapStatus::Config,
        Error::Io(_) => HarmapStatus::Io,
    }
}

/// Runs `f`, converting library errors and panics into status codes.
fn guarded(f: impl FnOnce() -> Result<(), HarmapStatus>) -> HarmapStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HarmapStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(HarmapStatus::Panic, "internal panic"),
    }
}

fn lib<T>(r: harmap::Result<T>) -> Result<T, HarmapStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, HarmapStatus> {
    if p.is_null() {
        return Err(fail(HarmapStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(HarmapStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, HarmapStatus> {
    p.as_ref()
        .ok_or_else(|| fail(HarmapStatus::NullPointer, format!("{what} is null")))
}

unsafe fn budget_or_default(p: *const HarmapBudget) -> OrbitBudget {
    p.as_ref().map_or_else(OrbitBudget::default, |b| b.inner.clone())
}

fn spec_of(s: &HarmapGridSpec) -> GridSpec {
    GridSpec::new(s.re_min, s.re_max, s.im_min, s.im_max, s.width, s.height)
}

fn threads_of(n: u32) -> Option<usize> {
    (n > 0).then_some(n as usize)
}

fn verdict_of(v: &PointVerdict) -> HarmapVerdict {
    let index = |i: Option<u32>| i.map_or(-1, i64::from);
    HarmapVerdict {
        membership: match v.membership {
            MembershipTag::FatouLike => HarmapMembership::FatouLike,
            MembershipTag::JuliaLike => HarmapMembership::JuliaLike,
            MembershipTag::Undetermined => HarmapMembership::Undetermined,
        },
        mode: match v.mode {
            None => HarmapMode::None,
            Some(FatouMode::ConvergentFamily) => HarmapMode::ConvergentFamily,
            Some(FatouMode::CompactDivergence) => HarmapMode::CompactDivergence,
        },
        orbit_class: match v.orbit_class {
            OrbitTag::Escaping => HarmapOrbitClass::Escaping,
            OrbitTag::OrbitallyBounded => HarmapOrbitClass::OrbitallyBounded,
            OrbitTag::Oscillating => HarmapOrbitClass::Oscillating,
            OrbitTag::Undetermined => HarmapOrbitClass::Undetermined,
        },
        exit_index: index(v.exit_index),
        settle_index: index(v.settle_index),
    }
}

/// Message for the last failing call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn harmap_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn harmap_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses `h` and `g` and stores a new map in `*out`.
///
/// # Safety
/// `h` and `g` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn harmap_map_new(h: *const c_char, g: *const c_char, out: *mut *mut HarmapMap) -> HarmapStatus {
    guarded(|| {
        if out.is_null() {
            return Err(fail(HarmapStatus::NullPointer, "out is null"));
        }
        let map = lib(HarmonicMap::parse(str_arg(h, "h")?, str_arg(g, "g")?))?;
        *out = Box::into_raw(Box::new(HarmapMap { inner: map }));
        Ok(())
    })
}

/// Stores the named preset map in `*out`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn harmap_map_from_preset(name: *const c_char, out: *mut *mut HarmapMap) -> HarmapStatus {
    guarded(|| {
        if out.is_null() {
            return Err(fail(HarmapStatus::NullPointer, "out is null"));
        }
        let p = lib(preset(str_arg(name, "name")?))?;
        *out = Box::into_raw(Box::new(HarmapMap { inner: p.map() }));
        Ok(())
    })
}

/// # Safety
/// `map` must come from this API and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn harmap_map_free(map: *mut HarmapMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// `f(z) = h(z) + conj(g(z))`.
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn harmap_map_eval(
    map: *const HarmapMap,
    z: HarmapComplex,
    out: *mut HarmapValue,
) -> HarmapStatus {
    guarded(|| {
        let map = ref_arg(map, "map")?;
        if out.is_null() {
            return Err(fail(HarmapStatus::NullPointer, "out is null"));
        }
        let v = eval_harmonic(&map.inner, Complex64::new(z.re, z.im), &Default::default());
        *out = match v {
            Value::Finite(w) => HarmapValue {
                overflow: false,
                re: w.re,
                im: w.im,
                log_abs: v.log_abs(),
            },
            Value::Overflow(lp) => HarmapValue {
                overflow: true,
                re: 0.0,
                im: 0.0,
                log_abs: lp.log_abs,
            },
        };
        Ok(())
    })
}

/// New budget with default limits. Free with [`harmap_budget_free`].
#[no_mangle]
pub extern "C" fn harmap_budget_new() -> *mut HarmapBudget {
    Box::into_raw(Box::new(HarmapBudget {
        inner: OrbitBudget::default(),
    }))
}

/// # Safety
/// `budget` must come from this API and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn harmap_budget_free(budget: *mut HarmapBudget) {
    if !budget.is_null() {
        drop(Box::from_raw(budget));
    }
}

/// Sets the iteration count and radii. The budget is left unchanged when
/// the new values are invalid.
///
/// # Safety
/// `budget` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn harmap_budget_set_limits(
    budget: *mut HarmapBudget,
    max_iter: u32,
    escape_radius: f64,
    bounded_radius: f64,
) -> HarmapStatus {
    guarded(|| {
        let b = budget
            .as_mut()
            .ok_or_else(|| fail(HarmapStatus::NullPointer, "budget is null"))?;
        let mut next = b.inner.clone();
        next.max_iter = max_iter;
        next.escape_radius = escape_radius;
        next.bounded_radius = bounded_radius;
        lib(next.validate())?;
        b.inner = next;
        Ok(())
    })
}

/// Sets the neighbour sampling: `count` ladder radii from `ladder` (strictly
/// decreasing), points per circle and the separation threshold.
///
/// # Safety
/// `budget` must be a live handle; `ladder` must point to `count` doubles.
#[no_mangle]
pub unsafe extern "C" fn harmap_budget_set_sampling(
    budget: *mut HarmapBudget,
    ladder: *const f64,
    count: usize,
    sample_count: u32,
    separation_epsilon: f64,
) -> HarmapStatus {
    guarded(|| {
        let b = budget
            .as_mut()
            .ok_or_else(|| fail(HarmapStatus::NullPointer, "budget is null"))?;
        if ladder.is_null() && count > 0 {
            return Err(fail(HarmapStatus::NullPointer, "ladder is null"));
        }
        let mut next = b.inner.clone();
        next.delta_ladder = if count == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(ladder, count).to_vec()
        };
        next.sample_count = sample_count;
        next.separation_epsilon = separation_epsilon;
        lib(next.validate())?;
        b.inner = next;
        Ok(())
    })
}

/// Classifies one point. A NULL `budget` means the default budget.
///
/// # Safety
/// `map` must be a live handle, `budget` live or NULL, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn harmap_classify_point(
    map: *const HarmapMap,
    budget: *const HarmapBudget,
    z: HarmapComplex,
    out: *mut HarmapVerdict,
) -> HarmapStatus {
    guarded(|| {
        let map = ref_arg(map, "map")?;
        if out.is_null() {
            return Err(fail(HarmapStatus::NullPointer, "out is null"));
        }
        let b = budget_or_default(budget);
        lib(b.validate())?;
        let v = harmap::classify_point(&map.inner, Complex64::new(z.re, z.im), &b);
        *out = verdict_of(&v);
        Ok(())
    })
}

/// Classifies every pixel into `out` (row-major, `width * height` entries).
/// `threads = 0` uses all cores; the result never depends on it.
///
/// # Safety
/// `map` live, `budget` live or NULL, `spec` readable, `out` writable for
/// `len` entries.
#[no_mangle]
pub unsafe extern "C" fn harmap_classify_grid(
    map: *const HarmapMap,
    budget: *const HarmapBudget,
    spec: *const HarmapGridSpec,
    threads: u32,
    out: *mut HarmapVerdict,
    len: usize,
) -> HarmapStatus {
    guarded(|| {
        let map = ref_arg(map, "map")?;
        let spec = spec_of(ref_arg(spec, "spec")?);
        lib(spec.validate())?;
        if len < spec.len() {
            return Err(fail(
                HarmapStatus::BufferTooSmall,
                format!("need {} entries, got {len}", spec.len()),
            ));
        }
        if out.is_null() {
            return Err(fail(HarmapStatus::NullPointer, "out is null"));
        }
        let grid = lib(classify_grid_with_threads(
            &map.inner,
            &spec,
            &budget_or_default(budget),
            threads_of(threads),
        ))?;
        let dst = std::slice::from_raw_parts_mut(out, spec.len());
        for (d, c) in dst.iter_mut().zip(&grid.cells) {
            *d = verdict_of(c);
        }
        Ok(())
    })
}

/// Renders the P6 image into `buf`. `*written` receives the image size,
/// also when the buffer is too small, so a NULL `buf` with `len = 0` queries
/// the size (at the cost of a full classification).
///
/// # Safety
/// `map` live, `budget` live or NULL, `spec` readable, `buf` writable for
/// `len` bytes (or NULL with `len = 0`), `written` writable.
#[no_mangle]
pub unsafe extern "C" fn harmap_render_ppm(
    map: *const HarmapMap,
    budget: *const HarmapBudget,
    spec: *const HarmapGridSpec,
    threads: u32,
    buf: *mut u8,
    len: usize,
    written: *mut usize,
) -> HarmapStatus {
    guarded(|| {
        let map = ref_arg(map, "map")?;
        let spec = spec_of(ref_arg(spec, "spec")?);
        if written.is_null() {
            return Err(fail(HarmapStatus::NullPointer, "written is null"));
        }
        let grid = lib(classify_grid_with_threads(
            &map.inner,
            &spec,
            &budget_or_default(budget),
            threads_of(threads),
        ))?;
        let bytes = encode_ppm(&grid);
        *written = bytes.len();
        if len < bytes.len() {
            return Err(fail(
                HarmapStatus::BufferTooSmall,
                format!("need {} bytes, got {len}", bytes.len()),
            ));
        }
        if buf.is_null() {
            return Err(fail(HarmapStatus::NullPointer, "buf is null"));
        }
        ptr::copy_nonoverlapping(bytes.as_ptr(), buf, bytes.len());
        Ok(())
    })
}
