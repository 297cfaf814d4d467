//! C interface to the `incoherence` toolkit.
//!
//! Conventions:
//! - Every fallible function returns an [`IncStatus`]; on anything other than
//!   `INC_STATUS_OK` the thread-local message is available from
//!   [`inc_last_error_message`].
//! - Diagrams and Cartan matrices cross the boundary as opaque handles,
//!   released with [`inc_diagram_free`] / [`inc_cartan_free`].
//! - Strings written to `char **out` parameters are owned by the caller and
//!   released with [`inc_string_free`].
//! - Panics never unwind into C; they are reported as `INC_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use incoherence::cli::report::Stages;
use incoherence::cli::stages::diagram_analysis;
use incoherence::coxeter::{cartan_from_diagram, cartan_type, CartanMatrix, CartanType, CoxeterDiagram};
use incoherence::vinberg::{integer_reflection_generators, verify_relations};
use incoherence::zariski::{certify_zariski_dense, even_subgroup_generators, DensityBudget};
use incoherence::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IncStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input failed to parse or violates a precondition.
    InvalidInput = 3,
    /// A budget was exhausted before the computation finished.
    ResourceLimit = 4,
    /// The input is well formed but outside what the library handles.
    Unsupported = 5,
    /// Internal error; the library state is unaffected.
    Panic = 6,
}

/// Vinberg type of an indecomposable Cartan matrix.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IncCartanType {
    Positive = 0,
    Zero = 1,
    Negative = 2,
}

/// Opaque Coxeter diagram.
pub struct IncDiagram(CoxeterDiagram);

/// Opaque Cartan matrix.
pub struct IncCartan(CartanMatrix);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs were replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(IncStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::ResourceLimit { .. } => IncStatus::ResourceLimit,
            Error::Unsupported(_) => IncStatus::Unsupported,
            _ => IncStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

/// Runs `f`, converting failures and panics into a status plus last-error message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> IncStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IncStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(format!("internal error: {message}"));
            IncStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(IncStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` must be null or point to a NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and NUL-terminated per the caller's contract.
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|e| Failure(IncStatus::InvalidUtf8, format!("{what}: {e}")))
}

/// # Safety
/// `p` must be null or a live handle from this library.
unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: per the caller's contract a non-null pointer is a live handle.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

/// # Safety
/// `out` must be null or valid for a pointer write.
unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and writable per the caller's contract.
    unsafe { out.write(value) };
    Ok(())
}

/// # Safety
/// `out` must be null or valid for a pointer write.
unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure(IncStatus::Panic, e.to_string()))?;
    // SAFETY: forwarded caller contract.
    unsafe { write_out(out, c.into_raw(), "out") }
}

/// Version of the library as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn inc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy of the calling thread's most recent error message, or null if the
/// last call succeeded. Release with [`inc_string_free`].
#[no_mangle]
pub extern "C" fn inc_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn inc_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by `CString::into_raw` in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Parses a diagram in the text format (`rank = n`, then `edge i j m` lines
/// with 1-based vertices).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn inc_diagram_parse(text: *const c_char, out: *mut *mut IncDiagram) -> IncStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let text = unsafe { read_str(text, "text") }?;
        let d = CoxeterDiagram::parse(text)?;
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, Box::into_raw(Box::new(IncDiagram(d))), "out") }
    })
}

/// The rank-5 Lannér pentagon with labels 4,3,3,3,3.
#[no_mangle]
pub extern "C" fn inc_diagram_pentagon() -> *mut IncDiagram {
    Box::into_raw(Box::new(IncDiagram(CoxeterDiagram::lanner_pentagon())))
}

/// # Safety
/// `d` must be null or a live diagram handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn inc_diagram_free(d: *mut IncDiagram) {
    if !d.is_null() {
        // SAFETY: created by `Box::into_raw` in this library.
        drop(unsafe { Box::from_raw(d) });
    }
}

/// # Safety
/// `d` must be a live diagram handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn inc_diagram_rank(d: *const IncDiagram, out: *mut usize) -> IncStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let d = unsafe { handle(d, "diagram") }?;
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, d.0.rank(), "out") }
    })
}

/// Diagram analysis (Cartan matrix, signature, subdiagrams, Lannér test,
/// type, arithmeticity) as JSON.
///
/// # Safety
/// `d` must be a live diagram handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn inc_diagram_analyze_json(d: *const IncDiagram, out: *mut *mut c_char) -> IncStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let d = unsafe { handle(d, "diagram") }?;
        let analysis = diagram_analysis(&d.0, &mut Stages::default())?;
        let json = serde_json::to_string(&analysis).map_err(|e| Failure(IncStatus::Panic, e.to_string()))?;
        // SAFETY: forwarded caller contract.
        unsafe { write_string(out, json) }
    })
}

/// Parses a Cartan matrix from JSON: rows of integers or exact strings.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn inc_cartan_from_json(json: *const c_char, out: *mut *mut IncCartan) -> IncStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let json = unsafe { read_str(json, "json") }?;
        let a = CartanMatrix::from_json_str(json)?;
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, Box::into_raw(Box::new(IncCartan(a))), "out") }
    })
}

/// The symmetric Cartan matrix `-2cos(π/m_ij)` of a diagram.
///
/// # Safety
/// `d` must be a live diagram handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn inc_cartan_from_diagram(d: *const IncDiagram, out: *mut *mut IncCartan) -> IncStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let d = unsafe { handle(d, "diagram") }?;
        let a = cartan_from_diagram(&d.0)?;
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, Box::into_raw(Box::new(IncCartan(a))), "out") }
    })
}

/// # Safety
/// `a` must be null or a live Cartan handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn inc_cartan_free(a: *mut IncCartan) {
    if !a.is_null() {
        // SAFETY: created by `Box::into_raw` in this library.
        drop(unsafe { Box::from_raw(a) });
    }
}

/// The matrix as JSON rows (integers as numbers, other entries as exact strings).
///
/// # Safety
/// `a` must be a live Cartan handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn inc_cartan_to_json(a: *const IncCartan, out: *mut *mut c_char) -> IncStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let a = unsafe { handle(a, "cartan") }?;
        // SAFETY: forwarded caller contract.
        unsafe { write_string(out, a.0.to_json().to_string()) }
    })
}

/// Vinberg type, decided exactly. Decomposable matrices are `INC_STATUS_INVALID_INPUT`.
///
/// # Safety
/// `a` must be a live Cartan handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn inc_cartan_type(a: *const IncCartan, out: *mut IncCartanType) -> IncStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let a = unsafe { handle(a, "cartan") }?;
        let t = match cartan_type(&a.0)? {
            CartanType::Positive => IncCartanType::Positive,
            CartanType::Zero => IncCartanType::Zero,
            CartanType::Negative => IncCartanType::Negative,
        };
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, t, "out") }
    })
}

/// Checks `(s_i s_j)^m_ij = 1` with exact orders for the integer reflection
/// representation of `a` against the labels of `d`. Writes whether every
/// pair passed to `all_pass` and the full report as JSON to `out`.
///
/// # Safety
/// Handles must be live; `all_pass` and `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn inc_verify_relations_json(
    a: *const IncCartan,
    d: *const IncDiagram,
    order_cap: u32,
    all_pass: *mut bool,
    out: *mut *mut c_char,
) -> IncStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let (a, d) = unsafe { (handle(a, "cartan")?, handle(d, "diagram")?) };
        let gens = integer_reflection_generators(&a.0)?;
        let report = verify_relations(&gens, &d.0, order_cap)?;
        let json = serde_json::to_string(&report).map_err(|e| Failure(IncStatus::Panic, e.to_string()))?;
        // SAFETY: forwarded caller contract.
        unsafe {
            write_out(all_pass, report.all_pass, "all_pass")?;
            write_string(out, json)
        }
    })
}

/// Zariski density certification for the integer reflection representation
/// of `a` (or its even-length subgroup when `even_subgroup` is set). Writes
/// whether a certificate was found and revalidated to `certified`, and
/// `{"outcome": ..., "revalidation": ...}` as JSON to `out`. An exhausted
/// word budget is a successful call with `certified == false`.
///
/// # Safety
/// `a` must be live; `certified` and `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn inc_density_certify_json(
    a: *const IncCartan,
    even_subgroup: bool,
    word_length: usize,
    prime_bound: u64,
    max_words: usize,
    certified: *mut bool,
    out: *mut *mut c_char,
) -> IncStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let a = unsafe { handle(a, "cartan") }?;
        let mut gens = integer_reflection_generators(&a.0)?;
        if even_subgroup {
            gens = even_subgroup_generators(&gens);
        }
        let outcome = certify_zariski_dense(&gens, DensityBudget { word_length, prime_bound, max_words })?;
        let check = outcome.certificate().map(|c| c.revalidate()).transpose()?;
        let ok = check.as_ref().is_some_and(|c| c.valid);
        let json = serde_json::json!({ "outcome": outcome, "revalidation": check }).to_string();
        // SAFETY: forwarded caller contract.
        unsafe {
            write_out(certified, ok, "certified")?;
            write_string(out, json)
        }
    })
}
