//! The C ABI exercised from Rust, plus a C program built against the
//! generated header and the shared library.

use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use tdlc_ffi::*;

const SHIFT: &str = r#"{"schema": 1, "universe": "laurent", "p": 2,
  "endo": {"up_tail": {"start": 0, "period": 1, "shift": 1, "templates": [[[1, 1]]]},
           "down_tail": {"end": 0, "period": 1, "shift": 1, "templates": [[[0, 1]]]}},
  "subgroups": {"O": {"base": 0}}}"#;

const SWAP: &str = r#"{"schema": 1, "universe": "finite", "group": {"kind": "cyclic-product", "factors": [2, 2]},
  "endo": {"gens": [[1, 0], [0, 1]], "images": [[0, 1], [1, 0]]},
  "subgroups": {"A": {"generators": [[1, 0]]}, "D": {"generators": [[1, 1]]}}}"#;

fn parse(doc: &str) -> *mut TdlcProblem {
    let doc = CString::new(doc).unwrap();
    let mut p = ptr::null_mut();
    let st = unsafe { tdlc_problem_parse(doc.as_ptr(), &mut p) };
    assert_eq!(st, TdlcStatus::Ok, "{}", last_error());
    assert!(!p.is_null());
    p
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(tdlc_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn shift_scale_and_displacement() {
    let p = parse(SHIFT);
    let (mut s, mut d, mut fin) = (0u64, 0u64, true);
    unsafe {
        assert_eq!(tdlc_problem_is_finite(p, &mut fin), TdlcStatus::Ok);
        assert_eq!(tdlc_scale(p, ptr::null(), &mut s), TdlcStatus::Ok, "{}", last_error());
        let o = CString::new("O").unwrap();
        assert_eq!(tdlc_displacement(p, o.as_ptr(), &mut d), TdlcStatus::Ok);
        tdlc_problem_free(p);
    }
    assert!(!fin);
    assert_eq!((s, d), (2, 2));
}

#[test]
fn swap_tidiness() {
    let p = parse(SWAP);
    let (a, dg) = (CString::new("A").unwrap(), CString::new("D").unwrap());
    let (mut ta, mut td, mut s) = (true, false, 0u64);
    unsafe {
        assert_eq!(tdlc_is_tidy(p, a.as_ptr(), &mut ta), TdlcStatus::Ok, "{}", last_error());
        assert_eq!(tdlc_is_tidy(p, dg.as_ptr(), &mut td), TdlcStatus::Ok);
        assert_eq!(tdlc_scale(p, a.as_ptr(), &mut s), TdlcStatus::Ok);
        tdlc_problem_free(p);
    }
    assert!(!ta && td);
    assert_eq!(s, 1);
}

#[test]
fn failures_carry_status_and_message() {
    let bad = CString::new("{\"schema\": 1, \"universe\": \"finite\"}").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { tdlc_problem_parse(bad.as_ptr(), &mut p) }, TdlcStatus::InvalidInput);
    assert!(p.is_null());
    assert!(!last_error().is_empty());

    let p = parse(SWAP);
    let missing = CString::new("nope").unwrap();
    let mut out = false;
    assert_eq!(unsafe { tdlc_is_tidy(p, missing.as_ptr(), &mut out) }, TdlcStatus::UnknownSubgroup);
    assert!(last_error().contains("nope"));
    assert_eq!(unsafe { tdlc_is_tidy(p, ptr::null(), ptr::null_mut()) }, TdlcStatus::NullArgument);
    unsafe { tdlc_problem_free(p) };
    unsafe { tdlc_problem_free(ptr::null_mut()) };
}

#[test]
fn fixtures_and_cli_through_the_abi() {
    let name = CString::new("laurent-shift-p3").unwrap();
    let (mut passed, mut total) = (0usize, 0usize);
    assert_eq!(unsafe { tdlc_fixture_run(name.as_ptr(), &mut passed, &mut total) }, TdlcStatus::Ok);
    assert!(total > 0 && passed == total);

    let args: Vec<CString> = ["examples", "--list"].iter().map(|a| CString::new(*a).unwrap()).collect();
    let argv: Vec<*const std::ffi::c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let (mut out, mut code) = (ptr::null_mut(), -1);
    assert_eq!(unsafe { tdlc_cli_run(argv.as_ptr(), argv.len(), &mut out, &mut code) }, TdlcStatus::Ok);
    let text = unsafe { CStr::from_ptr(out) }.to_string_lossy().into_owned();
    unsafe { tdlc_string_free(out) };
    assert_eq!(code, 0);
    assert!(text.contains("laurent-shift-p3"), "{text}");
    assert!(!unsafe { CStr::from_ptr(tdlc_version()) }.to_bytes().is_empty());
}

/// Directory holding the shared library built alongside this test.
fn lib_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header() {
    let dir = lib_dir();
    if !dir.join("libtdlc_ffi.so").exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or shared library");
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let src = manifest.join("tests").join("smoke.c");
    let bin = std::env::temp_dir().join(format!("tdlc-smoke-{}", std::process::id()));
    let st = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&bin)
        .arg(&src)
        .arg(format!("-I{}", manifest.join("include").display()))
        .arg(format!("-L{}", dir.display()))
        .arg("-ltdlc_ffi")
        .status()
        .unwrap();
    assert!(st.success(), "C compilation failed");
    let out = Command::new(&bin).env("LD_LIBRARY_PATH", &dir).output().unwrap();
    let _ = std::fs::remove_file(&bin);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout.contains("scale 2"), "{stdout}");
}
