use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::ptr;

use defhull_ffi::*;

fn cstr(p: *const std::ffi::c_char) -> String {
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn job(json: &str) -> (DefhullStatus, *mut DefhullJob) {
    let text = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    let s = unsafe { defhull_job_from_json(text.as_ptr(), &mut out) };
    (s, out)
}

#[test]
fn cohomology_dims_of_a_job() {
    let (s, j) = job(r#"{"input": {"kind": "delta-complex", "fixture": "torus"}}"#);
    assert_eq!(s, DefhullStatus::Ok);
    let mut dims = [9usize; 3];
    assert_eq!(unsafe { defhull_cohomology_dims(j, dims.as_mut_ptr()) }, DefhullStatus::Ok);
    assert_eq!(dims, [1, 2, 1]);
    let back = unsafe { defhull_job_to_json(j) };
    assert!(cstr(back).contains("delta-complex"));
    unsafe {
        defhull_string_free(back);
        defhull_job_free(j);
    }
}

#[test]
fn schema_and_flatness_errors() {
    let (s, j) = job("{not json");
    assert_eq!(s, DefhullStatus::Schema);
    assert!(j.is_null());
    assert!(cstr(defhull_last_error_message()).contains("schema"));

    let (s, j) = job(r#"{"input": {"kind": "presentation", "generators": ["a"], "relators": ["a^3"]}, "transport": [[["2"]]]}"#);
    assert_eq!(s, DefhullStatus::Precondition);
    assert!(j.is_null());
    assert!(cstr(defhull_last_error_message()).contains("not flat"));

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { defhull_job_from_json(ptr::null(), &mut out) }, DefhullStatus::InvalidArgument);
    assert_eq!(unsafe { defhull_cohomology_dims(ptr::null(), ptr::null_mut()) }, DefhullStatus::InvalidArgument);
}

#[test]
fn reports_and_mismatch_status() {
    let name = CString::new("oracle-torus-f3").unwrap();
    let mut j = ptr::null_mut();
    assert_eq!(unsafe { defhull_job_fixture(name.as_ptr(), &mut j) }, DefhullStatus::Ok);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { defhull_run(j, DefhullCommand::Oracle, &mut r) }, DefhullStatus::Ok);
    assert!(unsafe { defhull_report_passed(r) });
    assert!(cstr(unsafe { defhull_report_text(r) }).contains("9 = 9"));
    assert!(cstr(unsafe { defhull_report_json(r) }).contains("\"passed\": true"));
    unsafe {
        defhull_report_free(r);
        defhull_job_free(j);
    }

    let name = CString::new("oracle-corrupted").unwrap();
    assert_eq!(unsafe { defhull_job_fixture(name.as_ptr(), &mut j) }, DefhullStatus::Ok);
    assert_eq!(unsafe { defhull_run(j, DefhullCommand::Oracle, &mut r) }, DefhullStatus::Mismatch);
    assert!(!r.is_null());
    assert!(!unsafe { defhull_report_passed(r) });
    unsafe {
        defhull_report_free(r);
        defhull_job_free(j);
    }

    let unknown = CString::new("nope").unwrap();
    assert_eq!(unsafe { defhull_job_fixture(unknown.as_ptr(), &mut j) }, DefhullStatus::Schema);
    assert_eq!(unsafe { defhull_run(ptr::null(), DefhullCommand::Selftest, &mut r) }, DefhullStatus::Ok);
    unsafe { defhull_report_free(r) };
}

#[test]
fn presentation_dims_without_json() {
    let gens: Vec<CString> = ["a", "b"].iter().map(|s| CString::new(*s).unwrap()).collect();
    let rels = [CString::new("a*b*a^-1*b^-1").unwrap()];
    let gp: Vec<_> = gens.iter().map(|c| c.as_ptr()).collect();
    let rp: Vec<_> = rels.iter().map(|c| c.as_ptr()).collect();
    let mut dims = [0usize; 3];
    let s = unsafe { defhull_presentation_dims(gp.as_ptr(), 2, rp.as_ptr(), 1, 2, dims.as_mut_ptr()) };
    assert_eq!(s, DefhullStatus::Ok);
    assert_eq!(dims, [2, 4, 2]);
    assert_eq!(cstr(defhull_version()), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/defhull.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in [
        "defhull_job_from_json",
        "defhull_job_fixture",
        "defhull_job_free",
        "defhull_run",
        "defhull_report_text",
        "defhull_report_json",
        "defhull_report_free",
        "defhull_cohomology_dims",
        "defhull_presentation_dims",
        "defhull_string_free",
        "defhull_last_error_message",
        "typedef struct DefhullJob DefhullJob",
        "DEFHULL_STATUS_MISMATCH = 5",
    ] {
        assert!(text.contains(f), "{f} missing from the header");
    }
}

/// Compiles a small C client against the header; links it when the static library is present.
#[test]
fn c_client_compiles() {
    let Ok(cc) = which("cc") else {
        eprintln!("no C compiler, skipping");
        return;
    };
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let src = std::env::temp_dir().join(format!("defhull-client-{}.c", std::process::id()));
    std::fs::write(
        &src,
        r#"#include "defhull.h"
#include <stdio.h>
int main(void) {
    DefhullJob *job = NULL;
    if (defhull_job_from_json("{\"input\": {\"kind\": \"delta-complex\", \"fixture\": \"torus\"}}", &job) != DEFHULL_STATUS_OK) return 1;
    size_t dims[3];
    if (defhull_cohomology_dims(job, dims) != DEFHULL_STATUS_OK) return 2;
    defhull_job_free(job);
    printf("%zu %zu %zu\n", dims[0], dims[1], dims[2]);
    return 0;
}
"#,
    )
    .unwrap();
    let status = std::process::Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().and_then(|d| d.parent()).map(|d| d.join("libdefhull_ffi.a"));
    let Some(lib) = lib.filter(|l| l.exists()) else {
        eprintln!("static library not built, link step skipped");
        return;
    };
    let bin = src.with_extension("out");
    let status = std::process::Command::new(&cc)
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = std::process::Command::new(&bin).output().unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout), "1 2 1\n");
}

fn which(name: &str) -> Result<PathBuf, ()> {
    std::env::var_os("PATH")
        .and_then(|p| std::env::split_paths(&p).map(|d| d.join(name)).find(|c| c.exists()))
        .ok_or(())
}
