//! C interface to `entaudit`.
//!
//! Every fallible call returns an [`EntauditStatus`]; on anything but
//! `ENTAUDIT_STATUS_OK` a message is available from [`entaudit_last_error`]
//! on the same thread. Layouts are opaque handles released with
//! [`entaudit_layout_free`]; strings returned to the caller are released with
//! [`entaudit_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use entaudit::bounds::symmetric_assignment_check;
use entaudit::exact::{schmidt_rank_exact, GaussInt, ScaledVector};
use entaudit::feasibility::verify_prop2;
use entaudit::statevector::float_schmidt_rank;
use entaudit::target::GateLayout;
use entaudit::Error;
use num_complex::Complex64;

/// Largest state accepted across the boundary, in qubits.
pub const ENTAUDIT_MAX_QUBITS: usize = 24;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntauditStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    ParseError = 3,
    ZeroState = 4,
    Guard = 5,
    Internal = 6,
}

/// Opaque gate layout.
pub struct EntauditLayout {
    inner: GateLayout,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct EntauditProp2Summary {
    pub trees: u32,
    /// Trees with some prefix cut of rank at least 3.
    pub blocked_trees: u32,
    pub half_power: i64,
    pub amplitudes: u32,
    pub pass: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct EntauditSymmetricBound {
    pub capacity: u64,
    pub load: u64,
    pub bound: f64,
    pub ratio: f64,
    pub holds: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> EntauditStatus {
    match e {
        Error::Parse { .. } => EntauditStatus::ParseError,
        Error::ZeroState => EntauditStatus::ZeroState,
        Error::Guard(_) => EntauditStatus::Guard,
        _ => EntauditStatus::InvalidInput,
    }
}

/// Runs `f`, records its error, and turns panics into `Internal`.
fn guarded(f: impl FnOnce() -> Result<(), (EntauditStatus, String)>) -> EntauditStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EntauditStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            EntauditStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (EntauditStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (EntauditStatus, String) {
    (EntauditStatus::NullPointer, format!("{what} is null"))
}

/// Message for the last failing call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn entaudit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn entaudit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn entaudit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn entaudit_layout_default(out: *mut *mut EntauditLayout) -> EntauditStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = Box::into_raw(Box::new(EntauditLayout { inner: GateLayout::default_layout() }));
        Ok(())
    })
}

/// Parses seven `vi vj` lines.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn entaudit_layout_parse(text: *const c_char, out: *mut *mut EntauditLayout) -> EntauditStatus {
    guarded(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (EntauditStatus::InvalidInput, "layout text is not UTF-8".to_string()))?;
        let inner = GateLayout::parse(text).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(EntauditLayout { inner }));
        Ok(())
    })
}

/// # Safety
/// `layout` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn entaudit_layout_free(layout: *mut EntauditLayout) {
    if !layout.is_null() {
        drop(Box::from_raw(layout));
    }
}

/// Text form of a layout; free the result with [`entaudit_string_free`].
///
/// # Safety
/// `layout` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn entaudit_layout_to_text(layout: *const EntauditLayout, out: *mut *mut c_char) -> EntauditStatus {
    guarded(|| {
        let layout = layout.as_ref().ok_or_else(|| null("layout"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CString::new(layout.inner.to_text()).map_err(|e| (EntauditStatus::Internal, e.to_string()))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// Checks all 5040 line trees against the quarter-pi target of `layout`.
///
/// # Safety
/// `layout` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn entaudit_verify_prop2(
    layout: *const EntauditLayout,
    out: *mut EntauditProp2Summary,
) -> EntauditStatus {
    guarded(|| {
        let layout = layout.as_ref().ok_or_else(|| null("layout"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let r = verify_prop2(&layout.inner).map_err(lib_err)?;
        *out = EntauditProp2Summary {
            trees: r.trees as u32,
            blocked_trees: r.violated_trees as u32,
            half_power: r.half_power,
            amplitudes: r.amplitudes as u32,
            pass: r.pass,
        };
        Ok(())
    })
}

unsafe fn read_cut<'a>(n_qubits: usize, left: *const usize, n_left: usize) -> Result<&'a [usize], (EntauditStatus, String)> {
    if n_qubits > ENTAUDIT_MAX_QUBITS {
        return Err((EntauditStatus::Guard, format!("at most {ENTAUDIT_MAX_QUBITS} qubits")));
    }
    if n_left == 0 {
        return Ok(&[]);
    }
    if left.is_null() {
        return Err(null("left"));
    }
    Ok(std::slice::from_raw_parts(left, n_left))
}

/// Floating Schmidt rank of `2^n_qubits` amplitudes (qubit 0 is the most
/// significant index bit) across the qubits listed in `left`.
///
/// # Safety
/// `re` and `im` must each point to `2^n_qubits` doubles, `left` to
/// `n_left` indices, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn entaudit_schmidt_rank_float(
    re: *const f64,
    im: *const f64,
    n_qubits: usize,
    left: *const usize,
    n_left: usize,
    out: *mut usize,
) -> EntauditStatus {
    guarded(|| {
        let left = read_cut(n_qubits, left, n_left)?;
        if re.is_null() || im.is_null() {
            return Err(null("amplitudes"));
        }
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let len = 1usize << n_qubits;
        let (re, im) = (std::slice::from_raw_parts(re, len), std::slice::from_raw_parts(im, len));
        let amps: Vec<Complex64> = re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        *out = float_schmidt_rank(&amps, n_qubits, left).map_err(lib_err)?;
        Ok(())
    })
}

/// Exact Schmidt rank of Gaussian-integer amplitudes `re + i·im`.
///
/// # Safety
/// As for [`entaudit_schmidt_rank_float`], with 64-bit integer arrays.
#[no_mangle]
pub unsafe extern "C" fn entaudit_schmidt_rank_exact(
    re: *const i64,
    im: *const i64,
    n_qubits: usize,
    left: *const usize,
    n_left: usize,
    out: *mut usize,
) -> EntauditStatus {
    guarded(|| {
        let left = read_cut(n_qubits, left, n_left)?;
        if re.is_null() || im.is_null() {
            return Err(null("amplitudes"));
        }
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let len = 1usize << n_qubits;
        let (re, im) = (std::slice::from_raw_parts(re, len), std::slice::from_raw_parts(im, len));
        let v = ScaledVector::new(re.iter().zip(im).map(|(&a, &b)| GaussInt::new(a, b)).collect(), 0);
        *out = schmidt_rank_exact(&v, left).map_err(lib_err)?;
        Ok(())
    })
}

/// Uniform capacities `ceil(d^(1/m))` on `K_2m`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn entaudit_bound_symmetric(m: usize, d: u64, out: *mut EntauditSymmetricBound) -> EntauditStatus {
    guarded(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let r = symmetric_assignment_check(m, d).map_err(lib_err)?;
        *out = EntauditSymmetricBound {
            capacity: r.capacity,
            load: r.load.parse().map_err(|_| (EntauditStatus::Internal, "load overflows u64".to_string()))?,
            bound: r.bound,
            ratio: r.ratio,
            holds: r.holds,
        };
        Ok(())
    })
}
