//! C ABI for `defhull`.
//!
//! Jobs and reports are opaque handles owned by the caller and released with the matching
//! `_free` function. Every entry point returns a [`DefhullStatus`]; on failure the message is
//! available from [`defhull_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use defhull::cli::{self, Command, JobDescription, Report};
use defhull::complexes::{cohomology, presentation_complex, LocalSystem, Presentation};
use defhull::Error;

/// Status codes; the nonzero values above 1 agree with the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DefhullStatus {
    Ok = 0,
    InvalidArgument = 1,
    Schema = 2,
    Precondition = 3,
    Budget = 4,
    Mismatch = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DefhullCommand {
    Cohomology = 0,
    Hull = 1,
    Oracle = 2,
    Weights = 3,
    Selftest = 4,
}

/// Opaque job description.
pub struct DefhullJob {
    job: JobDescription,
}

/// Opaque command report.
pub struct DefhullReport {
    report: Report,
    text: CString,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> DefhullStatus {
    match e.exit_code() {
        2 => DefhullStatus::Schema,
        4 => DefhullStatus::Budget,
        5 => DefhullStatus::Mismatch,
        _ => DefhullStatus::Precondition,
    }
}

fn fail(e: Error) -> DefhullStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn guard(f: impl FnOnce() -> DefhullStatus) -> DefhullStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            DefhullStatus::Panic
        }
    }
}

fn invalid(msg: &str) -> DefhullStatus {
    set_error(msg);
    DefhullStatus::InvalidArgument
}

unsafe fn read_str<'a>(s: *const c_char) -> Option<&'a str> {
    if s.is_null() {
        return None;
    }
    CStr::from_ptr(s).to_str().ok()
}

/// Parses and validates a JSON job.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn defhull_job_from_json(json: *const c_char, out: *mut *mut DefhullJob) -> DefhullStatus {
    guard(|| {
        if out.is_null() {
            return invalid("null output pointer");
        }
        *out = ptr::null_mut();
        let Some(text) = read_str(json) else {
            return invalid("job text is null or not UTF-8");
        };
        match JobDescription::from_json(text).and_then(|j| j.validate().map(|_| j)) {
            Ok(job) => {
                *out = Box::into_raw(Box::new(DefhullJob { job }));
                DefhullStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// One of the built-in fixture jobs by name.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn defhull_job_fixture(name: *const c_char, out: *mut *mut DefhullJob) -> DefhullStatus {
    guard(|| {
        if out.is_null() {
            return invalid("null output pointer");
        }
        *out = ptr::null_mut();
        let Some(name) = read_str(name) else {
            return invalid("fixture name is null or not UTF-8");
        };
        match cli::fixture(name) {
            Some(job) => {
                *out = Box::into_raw(Box::new(DefhullJob { job }));
                DefhullStatus::Ok
            }
            None => fail(Error::Schema(format!("unknown fixture `{name}`"))),
        }
    })
}

/// The job serialized back to JSON; release with [`defhull_string_free`].
///
/// # Safety
/// `job` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn defhull_job_to_json(job: *const DefhullJob) -> *mut c_char {
    match job.as_ref() {
        Some(j) => CString::new(j.job.to_json()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `job` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn defhull_job_free(job: *mut DefhullJob) {
    if !job.is_null() {
        drop(Box::from_raw(job));
    }
}

/// Runs a command. A failed comparison still yields a report and returns
/// [`DefhullStatus::Mismatch`]. `job` may be null for the self-test.
///
/// # Safety
/// `job` must be a live handle (or null for the self-test) and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn defhull_run(
    job: *const DefhullJob,
    command: DefhullCommand,
    out: *mut *mut DefhullReport,
) -> DefhullStatus {
    guard(|| {
        if out.is_null() {
            return invalid("null output pointer");
        }
        *out = ptr::null_mut();
        let cmd = match command {
            DefhullCommand::Cohomology => Command::Cohomology,
            DefhullCommand::Hull => Command::Hull,
            DefhullCommand::Oracle => Command::Oracle,
            DefhullCommand::Weights => Command::Weights,
            DefhullCommand::Selftest => Command::Selftest,
        };
        let result = match (job.as_ref(), cmd) {
            (_, Command::Selftest) => cli::selftest(),
            (Some(j), _) => cli::run(cmd, &j.job),
            (None, _) => return invalid("null job"),
        };
        match result {
            Ok(report) => {
                let passed = report.passed;
                let text = CString::new(report.text.clone()).unwrap_or_default();
                let json = CString::new(report.json_string()).unwrap_or_default();
                *out = Box::into_raw(Box::new(DefhullReport { report, text, json }));
                if passed {
                    DefhullStatus::Ok
                } else {
                    set_error("comparison failed");
                    DefhullStatus::Mismatch
                }
            }
            Err(e) => fail(e),
        }
    })
}

/// Human-readable report text, owned by the report.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn defhull_report_text(report: *const DefhullReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.text.as_ptr())
}

/// Machine-readable report, owned by the report.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn defhull_report_json(report: *const DefhullReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn defhull_report_passed(report: *const DefhullReport) -> bool {
    report.as_ref().is_some_and(|r| r.report.passed)
}

/// # Safety
/// `report` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn defhull_report_free(report: *mut DefhullReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Writes `dim H⁰, dim H¹, dim H²` of the job's local system into `dims[0..3]`.
///
/// # Safety
/// `job` must be a live handle and `dims` must point to three writable `size_t`.
#[no_mangle]
pub unsafe extern "C" fn defhull_cohomology_dims(job: *const DefhullJob, dims: *mut usize) -> DefhullStatus {
    guard(|| {
        let Some(j) = job.as_ref() else {
            return invalid("null job");
        };
        if dims.is_null() {
            return invalid("null output pointer");
        }
        match cli::cmd_cohomology(&j.job) {
            Ok(r) => {
                let out = std::slice::from_raw_parts_mut(dims, 3);
                for (n, slot) in out.iter_mut().enumerate() {
                    *slot = r.json["dims"][n].as_u64().unwrap_or(0) as usize;
                }
                DefhullStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Rank-`rank` trivial-system cohomology of a presentation complex, without a JSON job.
/// `relators` holds `n_relators` NUL-terminated words; `dims` receives three values.
///
/// # Safety
/// All pointers must be valid for the given lengths.
#[no_mangle]
pub unsafe extern "C" fn defhull_presentation_dims(
    generators: *const *const c_char,
    n_generators: usize,
    relators: *const *const c_char,
    n_relators: usize,
    rank: usize,
    dims: *mut usize,
) -> DefhullStatus {
    guard(|| {
        if dims.is_null() || (generators.is_null() && n_generators > 0) || (relators.is_null() && n_relators > 0) {
            return invalid("null argument");
        }
        let mut gens = Vec::with_capacity(n_generators);
        for i in 0..n_generators {
            match read_str(*generators.add(i)) {
                Some(s) => gens.push(s),
                None => return invalid("generator is null or not UTF-8"),
            }
        }
        let mut rels = Vec::with_capacity(n_relators);
        for i in 0..n_relators {
            match read_str(*relators.add(i)) {
                Some(s) => rels.push(s),
                None => return invalid("relator is null or not UTF-8"),
            }
        }
        let run = || -> defhull::Result<[usize; 3]> {
            let p = Presentation::parse(&gens, &rels)?;
            let pc = presentation_complex(&p)?;
            let field = defhull::linalg::Field::Rational;
            let sys: LocalSystem = LocalSystem::trivial(&pc.complex, field, rank);
            let mut out = [0; 3];
            for (n, slot) in out.iter_mut().enumerate() {
                *slot = cohomology(&pc.complex, &sys, n)?.dim();
            }
            Ok(out)
        };
        match run() {
            Ok(v) => {
                std::slice::from_raw_parts_mut(dims, 3).copy_from_slice(&v);
                DefhullStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn defhull_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn defhull_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn defhull_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
