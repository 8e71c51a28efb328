//! C ABI for loading projects, compiling program automata and synthesizing
//! controllers.
//!
//! Every function returns a [`GsStatus`]. On failure a message is kept per
//! thread and can be read with [`gs_last_error`]. Handles returned through
//! out-parameters are owned by the caller and released with the matching
//! `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use golog_synth::bundle::Bundle;
use golog_synth::error::Error;
use golog_synth::synthesis::{synthesize, validate_controller, Outcome, SynthesisOptions};
use golog_synth::ta::{to_dot, TimedAutomaton};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsStatus {
    Ok = 0,
    /// No controller exists.
    Unrealizable = 1,
    /// Malformed or inconsistent input.
    InvalidInput = 2,
    /// A node budget or expansion bound was exhausted.
    ResourceExhausted = 3,
    NullPointer = 4,
    /// A controller failed validation.
    ValidationFailed = 5,
    Internal = 6,
}

/// A loaded project: theory, program, constraints and platform models.
pub struct GsBundle {
    bundle: Bundle,
}

pub struct GsAutomaton {
    automaton: TimedAutomaton,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(e: &Error) -> GsStatus {
    match e {
        Error::Resource(_) | Error::BoundExceeded { .. } => GsStatus::ResourceExhausted,
        Error::Internal(_) => GsStatus::Internal,
        _ => GsStatus::InvalidInput,
    }
}

/// Runs `f`, recording its error and turning panics into `Internal`.
fn guarded(f: impl FnOnce() -> Result<GsStatus, (GsStatus, String)>) -> GsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside the library");
            GsStatus::Internal
        }
    }
}

fn lib(e: Error) -> (GsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (GsStatus, String) {
    (GsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (GsStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (GsStatus::InvalidInput, format!("{what} is not valid UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

fn string_out(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn gs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Loads every project file found in `dir`.
///
/// # Safety
/// `dir` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gs_bundle_load(dir: *const c_char, out: *mut *mut GsBundle) -> GsStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let dir = text(dir, "dir")?;
        let bundle = Bundle::load_dir(Path::new(dir)).map_err(lib)?;
        put(out, GsBundle { bundle });
        Ok(GsStatus::Ok)
    })
}

/// # Safety
/// `b` must come from [`gs_bundle_load`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gs_bundle_free(b: *mut GsBundle) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Program automaton of the project's program.
///
/// # Safety
/// `b` must be a live bundle handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gs_compile(
    b: *const GsBundle,
    max_expansions: usize,
    out: *mut *mut GsAutomaton,
) -> GsStatus {
    guarded(|| {
        let b = b.as_ref().ok_or_else(|| null("bundle"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let automaton = b.bundle.pta(max_expansions).map_err(lib)?;
        put(out, GsAutomaton { automaton });
        Ok(GsStatus::Ok)
    })
}

/// Plant of the project: the program automaton combined with the platform.
///
/// # Safety
/// `b` must be a live bundle handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gs_plant(
    b: *const GsBundle,
    max_expansions: usize,
    out: *mut *mut GsAutomaton,
) -> GsStatus {
    guarded(|| {
        let b = b.as_ref().ok_or_else(|| null("bundle"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let automaton = b.bundle.plant(max_expansions).map_err(lib)?;
        put(out, GsAutomaton { automaton });
        Ok(GsStatus::Ok)
    })
}

/// Synthesizes a controller for the project's plant and constraints.
/// With `m == 0` the granularity is derived from the constants. Returns
/// `Unrealizable` and leaves `*out` untouched when no controller exists.
///
/// # Safety
/// `b` must be a live bundle handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gs_synthesize(
    b: *const GsBundle,
    m: u32,
    k: u32,
    node_budget: usize,
    out: *mut *mut GsAutomaton,
) -> GsStatus {
    guarded(|| {
        let b = b.as_ref().ok_or_else(|| null("bundle"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let plant = b.bundle.plant(100_000).map_err(lib)?;
        let mu = b
            .bundle
            .granularity(&plant, (m != 0).then_some((m, k)))
            .map_err(lib)?;
        let mut opts = SynthesisOptions::new(mu);
        if node_budget != 0 {
            opts.node_budget = node_budget;
        }
        match synthesize(&plant, &b.bundle.constraints, &opts).map_err(lib)? {
            Outcome::Controller(c) => {
                put(
                    out,
                    GsAutomaton {
                        automaton: c.automaton,
                    },
                );
                Ok(GsStatus::Ok)
            }
            Outcome::Unrealizable { nodes_explored } => Err((
                GsStatus::Unrealizable,
                format!("no controller exists ({nodes_explored} game nodes explored)"),
            )),
        }
    })
}

/// Checks a controller against the project's plant and constraints on all
/// closed-loop words of at most `bound` letters.
///
/// # Safety
/// `b` and `controller` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn gs_verify(
    b: *const GsBundle,
    controller: *const GsAutomaton,
    bound: usize,
) -> GsStatus {
    guarded(|| {
        let b = b.as_ref().ok_or_else(|| null("bundle"))?;
        let c = controller.as_ref().ok_or_else(|| null("controller"))?;
        let plant = b.bundle.plant(100_000).map_err(lib)?;
        let mu = b.bundle.granularity(&plant, None).map_err(lib)?;
        let report = validate_controller(
            &plant,
            &c.automaton,
            &b.bundle.constraints,
            &mu,
            bound,
            None,
        )
        .map_err(lib)?;
        if report.passed() {
            Ok(GsStatus::Ok)
        } else {
            Err((GsStatus::ValidationFailed, report.to_string()))
        }
    })
}

/// Parses an automaton from its JSON form.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gs_automaton_from_json(
    json: *const c_char,
    out: *mut *mut GsAutomaton,
) -> GsStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let automaton = TimedAutomaton::from_json(text(json, "json")?).map_err(lib)?;
        put(out, GsAutomaton { automaton });
        Ok(GsStatus::Ok)
    })
}

/// JSON form of an automaton; release with [`gs_string_free`].
///
/// # Safety
/// `a` must be a live automaton handle.
#[no_mangle]
pub unsafe extern "C" fn gs_automaton_to_json(a: *const GsAutomaton) -> *mut c_char {
    match a.as_ref() {
        Some(a) => string_out(a.automaton.to_json()),
        None => ptr::null_mut(),
    }
}

/// Graphviz form of an automaton; release with [`gs_string_free`].
///
/// # Safety
/// `a` must be a live automaton handle and `name` a valid C string or null.
#[no_mangle]
pub unsafe extern "C" fn gs_automaton_to_dot(
    a: *const GsAutomaton,
    name: *const c_char,
) -> *mut c_char {
    let name = if name.is_null() {
        Ok("automaton")
    } else {
        text(name, "name")
    };
    match (a.as_ref(), name) {
        (Some(a), Ok(name)) => string_out(to_dot(&a.automaton, name)),
        _ => ptr::null_mut(),
    }
}

/// Number of locations of an automaton, or 0 for null.
///
/// # Safety
/// `a` must be a live automaton handle or null.
#[no_mangle]
pub unsafe extern "C" fn gs_automaton_location_count(a: *const GsAutomaton) -> usize {
    a.as_ref().map_or(0, |a| a.automaton.locations.len())
}

/// # Safety
/// `a` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gs_automaton_free(a: *mut GsAutomaton) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// # Safety
/// `s` must be a string returned by this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
