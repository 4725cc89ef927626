//! C ABI for `tdlc`.
//!
//! Problems are opaque handles created by [`tdlc_problem_parse`] and released
//! with [`tdlc_problem_free`].  Every fallible call returns a
//! [`TdlcStatus`]; results are written through out-pointers only on
//! [`TdlcStatus::Ok`].  The message of the most recent failure on the calling
//! thread is available from [`tdlc_last_error`].  Strings handed out by the
//! library are released with [`tdlc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use tdlc::certificate::Certificate;
use tdlc::engine::{self, Config, Universe};
use tdlc::error::Error;
use tdlc::index::Index;
use tdlc::schema::{self, Problem};
use tdlc::seq::epc::EpcSubgroup;

/// Outcome of a library call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TdlcStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The problem document or an argument was rejected.
    InvalidInput = 3,
    /// No subgroup with the given name exists in the problem.
    UnknownSubgroup = 4,
    /// The universe cannot perform the operation.
    Unsupported = 5,
    /// The answer was not certified within the configured horizon.
    Inconclusive = 6,
    /// An internal consistency check failed.
    Postcondition = 7,
    /// The result does not fit in the output type.
    Overflow = 8,
    /// The library panicked; the handle involved should be discarded.
    Panic = 9,
}

/// A parsed problem: a universe, an endomorphism and named subgroups.
pub struct TdlcProblem {
    problem: Problem,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

struct Failure(TdlcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Capability(_) => TdlcStatus::Unsupported,
            Error::Inconclusive { .. } => TdlcStatus::Inconclusive,
            Error::Postcondition(_) => TdlcStatus::Postcondition,
            _ => TdlcStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

/// Runs `f`, recording any failure or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TdlcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TdlcStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TdlcStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(TdlcStatus::NullArgument, format!("{what} is null"))
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn opt_str<'a>(s: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if s.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(s)
        .to_str()
        .map(Some)
        .map_err(|_| Failure(TdlcStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn to_u64(i: &Index, what: &str) -> Result<u64, Failure> {
    i.to_u64().ok_or_else(|| Failure(TdlcStatus::Overflow, format!("{what} {i} does not fit in 64 bits")))
}

fn certified(c: &Certificate, what: &str) -> Result<(), Failure> {
    if c.is_inconclusive() {
        Err(Failure(TdlcStatus::Inconclusive, format!("{what}: {}", c.evidence.join("; "))))
    } else {
        Ok(())
    }
}

fn subgroup<S: Clone>(
    subs: &std::collections::BTreeMap<String, S>,
    name: Option<&str>,
    default: impl FnOnce() -> S,
) -> Result<S, Failure> {
    match name {
        None => Ok(default()),
        Some(n) => {
            subs.get(n).cloned().ok_or_else(|| Failure(TdlcStatus::UnknownSubgroup, format!("no subgroup named {n:?}")))
        }
    }
}

/// Something computable on either kind of universe.
trait Query {
    type Out;
    fn run<U: Universe>(&self, u: &U, e: &U::Endo, s: &U::Subgroup) -> Result<Self::Out, Failure>;
}

/// # Safety
/// `p` must be null or a handle from [`tdlc_problem_parse`]; `name` must be
/// null or a valid NUL-terminated string.
unsafe fn query<Q: Query>(p: *const TdlcProblem, name: *const c_char, q: Q) -> Result<Q::Out, Failure> {
    let p = p.as_ref().ok_or_else(|| null("problem"))?;
    let name = opt_str(name, "subgroup name")?;
    match &p.problem {
        Problem::Finite(f) => {
            let s = subgroup(&f.subgroups, name, || f.universe.whole_group())?;
            q.run(&f.universe, &f.endo, &s)
        }
        Problem::Laurent(l) => {
            let s = subgroup(&l.subgroups, name, || EpcSubgroup::power_series(l.universe.field().p(), 0))?;
            q.run(&l.universe, &l.endo, &s)
        }
    }
}

struct Scale;
impl Query for Scale {
    type Out = u64;
    fn run<U: Universe>(&self, u: &U, e: &U::Endo, s: &U::Subgroup) -> Result<u64, Failure> {
        let r = engine::scale(u, e, s, &Config::default())?;
        certified(&r.certificate, "scale")?;
        to_u64(&r.scale, "scale")
    }
}

struct Displacement;
impl Query for Displacement {
    type Out = u64;
    fn run<U: Universe>(&self, u: &U, e: &U::Endo, s: &U::Subgroup) -> Result<u64, Failure> {
        to_u64(&engine::displacement_index(u, e, s)?, "displacement")
    }
}

struct Tidy;
impl Query for Tidy {
    type Out = bool;
    fn run<U: Universe>(&self, u: &U, e: &U::Endo, s: &U::Subgroup) -> Result<bool, Failure> {
        let r = engine::check_tidy(u, e, s, &Config::default())?;
        certified(&r.certificate(), "tidiness")?;
        Ok(r.tidy())
    }
}

/// Parses a problem document (JSON).  On success `*out` owns a new handle.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tdlc_problem_parse(json: *const c_char, out: *mut *mut TdlcProblem) -> TdlcStatus {
    guard(|| {
        let text = opt_str(json, "document")?.ok_or_else(|| null("document"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let problem = schema::parse_problem(text)?;
        *out = Box::into_raw(Box::new(TdlcProblem { problem }));
        Ok(())
    })
}

/// Releases a problem handle.  Null is ignored.
///
/// # Safety
/// `p` must be null or a handle from [`tdlc_problem_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tdlc_problem_free(p: *mut TdlcProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Whether the problem lives in a finite group (`true`) or in Laurent
/// series (`false`).
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tdlc_problem_is_finite(p: *const TdlcProblem, out: *mut bool) -> TdlcStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("problem"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = matches!(p.problem, Problem::Finite(_));
        Ok(())
    })
}

/// The scale of the problem's endomorphism, computed from the named
/// subgroup (null: the whole finite group, or `F_p[[t]]`).
///
/// # Safety
/// `p` must be a live handle, `subgroup` null or a NUL-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tdlc_scale(p: *const TdlcProblem, subgroup: *const c_char, out: *mut u64) -> TdlcStatus {
    guard(|| {
        let v = query(p, subgroup, Scale)?;
        *out.as_mut().ok_or_else(|| null("out"))? = v;
        Ok(())
    })
}

/// The displacement index `[U : U ∩ α⁻¹(U)]` of the named subgroup.
///
/// # Safety
/// As for [`tdlc_scale`].
#[no_mangle]
pub unsafe extern "C" fn tdlc_displacement(
    p: *const TdlcProblem,
    subgroup: *const c_char,
    out: *mut u64,
) -> TdlcStatus {
    guard(|| {
        let v = query(p, subgroup, Displacement)?;
        *out.as_mut().ok_or_else(|| null("out"))? = v;
        Ok(())
    })
}

/// Whether the named subgroup is tidy for the endomorphism.
///
/// # Safety
/// As for [`tdlc_scale`].
#[no_mangle]
pub unsafe extern "C" fn tdlc_is_tidy(p: *const TdlcProblem, subgroup: *const c_char, out: *mut bool) -> TdlcStatus {
    guard(|| {
        let v = query(p, subgroup, Tidy)?;
        *out.as_mut().ok_or_else(|| null("out"))? = v;
        Ok(())
    })
}

/// Runs a built-in fixture and reports how many of its entries passed.
///
/// # Safety
/// `name` must be a NUL-terminated string; `passed` and `total` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tdlc_fixture_run(name: *const c_char, passed: *mut usize, total: *mut usize) -> TdlcStatus {
    guard(|| {
        let name = opt_str(name, "fixture name")?.ok_or_else(|| null("fixture name"))?;
        let (passed, total) =
            (passed.as_mut().ok_or_else(|| null("passed"))?, total.as_mut().ok_or_else(|| null("total"))?);
        let r = tdlc::fixtures::run_fixture(name, &Config::default())?;
        *total = r.outcomes.len();
        *passed = r.outcomes.iter().filter(|o| o.pass).count();
        Ok(())
    })
}

/// Runs the command-line interface with `argv[0..argc]` (without the
/// program name).  `*out` receives the printed output, to be released with
/// [`tdlc_string_free`]; `*exit_code` the process exit code the CLI would use.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings; `out` and
/// `exit_code` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tdlc_cli_run(
    argv: *const *const c_char,
    argc: usize,
    out: *mut *mut c_char,
    exit_code: *mut c_int,
) -> TdlcStatus {
    guard(|| {
        if argv.is_null() && argc > 0 {
            return Err(null("argv"));
        }
        let (out, exit_code) =
            (out.as_mut().ok_or_else(|| null("out"))?, exit_code.as_mut().ok_or_else(|| null("exit_code"))?);
        let mut args = vec!["tdlc".to_string()];
        for i in 0..argc {
            let a = opt_str(*argv.add(i), "argument")?.ok_or_else(|| null("argument"))?;
            args.push(a.to_string());
        }
        let mut buf = Vec::new();
        *exit_code = tdlc::cli::run(args, &mut buf);
        let text = String::from_utf8_lossy(&buf).replace('\0', " ");
        *out = CString::new(text).expect("nul bytes removed").into_raw();
        Ok(())
    })
}

/// Releases a string returned by the library.  Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tdlc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message of the last failed call on this thread ("" after a success).
/// Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn tdlc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// The library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tdlc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
