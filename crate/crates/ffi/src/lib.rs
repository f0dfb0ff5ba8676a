//! C ABI for smoothlab.
//!
//! Objects cross the boundary as opaque handles created by `sl_*_new`-style
//! calls and released by the matching `sl_*_free`. Every fallible call returns
//! an [`SlStatus`]; on failure the message is available from
//! [`sl_last_error_message`] on the same thread.

use smoothlab::kfunctional::k_exact_l2;
use smoothlab::lab::{self, experiments::parse_operator, report, ExperimentConfig};
use smoothlab::moduli::{classical_modulus, StepSet, DEFAULT_DENSITY};
use smoothlab::spectral::{analyze, lp_norm};
use smoothlab::summation::approximation_error;
use smoothlab::{Error, GridFunction, LebesgueExponent, MultiplierDescriptor};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidGrid = 3,
    ShapeMismatch = 4,
    Descriptor = 5,
    Domain = 6,
    Numerical = 7,
    Config = 8,
    UnknownFunction = 9,
    Io = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

/// Sampled function on the periodic grid.
pub struct SlGridFunction(GridFunction);

/// Parsed summation method.
pub struct SlMultiplier(MultiplierDescriptor);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SlStatus {
    match e {
        Error::InvalidGrid(_) => SlStatus::InvalidGrid,
        Error::ShapeMismatch(_) => SlStatus::ShapeMismatch,
        Error::Descriptor(_) => SlStatus::Descriptor,
        Error::Domain(_) => SlStatus::Domain,
        Error::Numerical(_) => SlStatus::Numerical,
        Error::Config(_) => SlStatus::Config,
        Error::UnknownFunction(_) => SlStatus::UnknownFunction,
        Error::Io(_) => SlStatus::Io,
    }
}

struct Fail(SlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> SlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SlStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("panic inside smoothlab");
            SlStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(SlStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail(SlStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn get<'a, T>(h: *const T, what: &str) -> Result<&'a T, Fail> {
    h.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn exponent(p: f64) -> Result<LebesgueExponent, Fail> {
    Ok(LebesgueExponent::new(p)?)
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn sl_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a grid function from `len = n^dim` real samples in row-major order.
///
/// # Safety
/// `samples` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_grid_from_real(
    dim: usize,
    n: usize,
    samples: *const f64,
    len: usize,
    out: *mut *mut SlGridFunction,
) -> SlStatus {
    guard(|| {
        if samples.is_null() {
            return Err(null("samples"));
        }
        let data = std::slice::from_raw_parts(samples, len);
        let g = GridFunction::from_real(dim, n, data)?;
        put(out, Box::into_raw(Box::new(SlGridFunction(g))), "out")
    })
}

/// Samples a named corpus function (see `smoothlab corpus list`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_grid_from_corpus(
    name: *const c_char,
    dim: usize,
    n: usize,
    seed: u64,
    out: *mut *mut SlGridFunction,
) -> SlStatus {
    guard(|| {
        let g = lab::corpus_generate(text(name, "name")?, dim, n, seed)?;
        put(out, Box::into_raw(Box::new(SlGridFunction(g))), "out")
    })
}

/// # Safety
/// `g` must be null or a handle from this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn sl_grid_free(g: *mut SlGridFunction) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of samples, n^dim; 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sl_grid_len(g: *const SlGridFunction) -> usize {
    g.as_ref().map_or(0, |g| g.0.samples().len())
}

/// Copies the real parts of the samples into `out[0..len]`.
///
/// # Safety
/// `g` must be a live handle; `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sl_grid_real_parts(g: *const SlGridFunction, out: *mut f64, len: usize) -> SlStatus {
    guard(|| {
        let g = get(g, "grid")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let re = g.0.real_parts();
        if len < re.len() {
            return Err(Fail(SlStatus::BufferTooSmall, format!("need {} values, got {len}", re.len())));
        }
        ptr::copy_nonoverlapping(re.as_ptr(), out, re.len());
        Ok(())
    })
}

/// Normalized L_p norm; pass `INFINITY` for p = ∞.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_lp_norm(g: *const SlGridFunction, p: f64, out: *mut f64) -> SlStatus {
    guard(|| {
        let g = get(g, "grid")?;
        put(out, lp_norm(&g.0, exponent(p)?), "out")
    })
}

/// Classical modulus of order `r` at step `h`, over the unit segment in d = 1
/// and the unit ball otherwise.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_classical_modulus(
    g: *const SlGridFunction,
    r: u32,
    h: f64,
    p: f64,
    out: *mut f64,
) -> SlStatus {
    guard(|| {
        let g = get(g, "grid")?;
        let set = if g.0.dim() == 1 { StepSet::unit_segment() } else { StepSet::ball(DEFAULT_DENSITY)? };
        put(out, classical_modulus(&g.0, r, &set, h, exponent(p)?)?, "out")
    })
}

/// Parses a method descriptor such as `fejer`, `riesz:2:1` or `trigub:3`.
///
/// # Safety
/// `descriptor` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_multiplier_parse(descriptor: *const c_char, out: *mut *mut SlMultiplier) -> SlStatus {
    guard(|| {
        let m: MultiplierDescriptor = text(descriptor, "descriptor")?.parse()?;
        put(out, Box::into_raw(Box::new(SlMultiplier(m))), "out")
    })
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sl_multiplier_free(m: *mut SlMultiplier) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Value of the generator at `x[0..dim]`, split into real and imaginary parts.
///
/// # Safety
/// `m` must be a live handle, `x` must point to `dim` doubles, `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_multiplier_eval(
    m: *const SlMultiplier,
    x: *const f64,
    dim: usize,
    re: *mut f64,
    im: *mut f64,
) -> SlStatus {
    guard(|| {
        let m = get(m, "multiplier")?;
        if x.is_null() {
            return Err(null("x"));
        }
        let v = m.0.evaluate(std::slice::from_raw_parts(x, dim))?;
        put(re, v.re, "re")?;
        put(im, v.im, "im")
    })
}

/// ‖f − Φ_ε f‖_p.
///
/// # Safety
/// `g` and `m` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_approximation_error(
    g: *const SlGridFunction,
    m: *const SlMultiplier,
    eps: f64,
    p: f64,
    out: *mut f64,
) -> SlStatus {
    guard(|| {
        let g = get(g, "grid")?;
        let m = get(m, "multiplier")?;
        put(out, approximation_error(&analyze(&g.0), &m.0, eps, exponent(p)?)?, "out")
    })
}

/// Exact L₂ K-functional K(t; f) for an operator such as `derivative:1`,
/// `laplacian:2`, `axis:1.5`, `max_degree` or `radial:1`.
///
/// # Safety
/// `g` must be a live handle, `op` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_k_exact_l2(
    g: *const SlGridFunction,
    op: *const c_char,
    t: f64,
    out: *mut f64,
) -> SlStatus {
    guard(|| {
        let g = get(g, "grid")?;
        let op = parse_operator(text(op, "op")?)?;
        put(out, k_exact_l2(&g.0, t, &op)?.value, "out")
    })
}

/// Runs an experiment from a JSON config and returns its rows as CSV in a
/// string released with [`sl_string_free`]. `failed_rows` (optional) receives
/// the number of error or flagged rows.
///
/// # Safety
/// `config_json` must be a NUL-terminated string; `out` must be writable;
/// `failed_rows` may be null.
#[no_mangle]
pub unsafe extern "C" fn sl_run_experiment_csv(
    config_json: *const c_char,
    out: *mut *mut c_char,
    failed_rows: *mut usize,
) -> SlStatus {
    guard(|| {
        let cfg = ExperimentConfig::from_json(text(config_json, "config_json")?)?;
        let rows = lab::run_experiment(&cfg)?;
        let csv = report::to_csv(&rows)?;
        if !failed_rows.is_null() {
            *failed_rows = rows.iter().filter(|r| r.is_failure()).count();
        }
        let c = CString::new(csv).map_err(|_| Fail(SlStatus::Io, "CSV contains NUL".into()))?;
        put(out, c.into_raw(), "out")
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn sl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn message() -> String {
        let mut buf = [0 as c_char; 256];
        unsafe { sl_last_error_message(buf.as_mut_ptr(), buf.len()) };
        unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
    }

    #[test]
    fn error_codes_and_messages() {
        let mut g = ptr::null_mut();
        let s = unsafe { sl_grid_from_corpus(c"nope".as_ptr(), 1, 64, 0, &mut g) };
        assert_eq!(s, SlStatus::UnknownFunction);
        assert!(message().contains("nope"));
        assert!(g.is_null());
        let mut v = 0.0;
        assert_eq!(unsafe { sl_lp_norm(ptr::null(), 2.0, &mut v) }, SlStatus::NullPointer);
    }

    #[test]
    fn truncated_message() {
        let mut m = ptr::null_mut();
        unsafe { sl_multiplier_parse(c"bogus:1".as_ptr(), &mut m) };
        let mut buf = [1 as c_char; 4];
        let full = unsafe { sl_last_error_message(buf.as_mut_ptr(), 4) };
        assert!(full > 3);
        assert_eq!(buf[3], 0);
    }
}
